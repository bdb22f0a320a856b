#include <doctest.h>

#include <cmath>

#include "ilab/random.hpp"
#include "ilab/verify.hpp"

using namespace ilab;

TEST_CASE("two-sample statistic") {
  std::vector<double> a{0.0, 1.0, 2.0};
  CHECK(verify::ks_two_sample(a, a) == 0.0);
  std::vector<double> z{0.0}, o{1.0};
  CHECK(verify::ks_two_sample(z, o) == 1.0);
  CHECK_THROWS(verify::ks_two_sample({}, a));
  RandomStream rng(1);
  std::vector<double> g1(100000), g2(100000);
  for (auto& v : g1) v = rng.normal();
  for (auto& v : g2) v = rng.normal();
  CHECK(verify::ks_two_sample(g1, g2) < 0.01);
}

TEST_CASE("uniform statistic") {
  RandomStream rng(2);
  std::vector<double> u(100000);
  for (auto& v : u) v = rng.uniform();
  CHECK(verify::ks_uniform(u) < 0.01);
}

TEST_CASE("mean and standard error") {
  std::vector<double> c{2.0, 2.0, 2.0};
  const auto ms = verify::mc_mean_with_se(c);
  CHECK(ms.mean == 2.0);
  CHECK(ms.se == 0.0);
  // antithetic pooling is exactly centered
  RandomStream rng(3);
  std::vector<double> pooled;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal();
    pooled.push_back(x);
    pooled.push_back(-x);
  }
  CHECK(verify::mc_mean_with_se(pooled).mean == doctest::Approx(0.0).epsilon(1e-15));
  // CLT sanity
  std::vector<double> g(10000);
  for (auto& v : g) v = rng.normal();
  const auto m2 = verify::mc_mean_with_se(g);
  CHECK(std::abs(m2.mean) < 4.0 * m2.se);
}

TEST_CASE("per-coordinate statistic") {
  std::vector<double> a{0.0, 10.0, 1.0, 11.0};  // two rows (dim 2)
  std::vector<double> b{0.0, 10.0, 1.0, 11.0};
  CHECK(verify::per_coordinate_ks(a, b, 2) == 0.0);
  std::vector<double> c{0.0, 20.0, 1.0, 21.0};
  CHECK(verify::per_coordinate_ks(a, c, 2) == 1.0);
}

TEST_CASE("suites are deterministic and power-guarded") {
  verify::SuiteConfig cfg;
  cfg.seed = 7;
  cfg.samples = 20;  // fast run of the residual suite
  const auto r1 = verify::suite("eigenfunction", cfg);
  const auto r2 = verify::suite("eigenfunction", cfg);
  CHECK(verify::reports_to_json(r1) == verify::reports_to_json(r2));
  for (const auto& r : r1) CHECK(r.pass);

  verify::SuiteConfig weak;
  weak.samples = 10;
  const auto guarded = verify::suite("invariance", weak);
  REQUIRE(guarded.size() == 1);
  CHECK_FALSE(guarded[0].pass);
  CHECK(guarded[0].details.find("inconclusive") != std::string::npos);

  CHECK_THROWS(verify::suite("not-a-suite", cfg));
}

TEST_CASE("report json schema") {
  verify::TestReport r;
  r.name = "demo";
  r.statistic = 0.5;
  r.threshold = 1.0;
  r.n_samples = 10;
  r.seed = 3;
  r.pass = true;
  r.details = "ok";
  const std::string js = verify::reports_to_json({r});
  CHECK(js.find("\"name\"") != std::string::npos);
  CHECK(js.find("\"statistic\"") != std::string::npos);
  CHECK(js.find("\"threshold\"") != std::string::npos);
  CHECK(js.find("\"n_samples\"") != std::string::npos);
  CHECK(js.find("\"seed\"") != std::string::npos);
  CHECK(js.find("\"pass\"") != std::string::npos);
  CHECK(js.find("\"details\"") != std::string::npos);
}
