#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ilab/core.hpp"
#include "ilab/links.hpp"
#include "ilab/verify.hpp"

using namespace ilab;

namespace {
// midpoint rule: keeps the nodes strictly inside indicator boundaries
double integrate(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (b - a) * (i + 0.5) / n);
  return s * (b - a) / n;
}
}  // namespace

TEST_CASE("link density closed form") {
  CHECK(links::link_density(WeylPoint{{0.0, 1.0}}, WeylPoint{{0.5}}) == doctest::Approx(1.0));
  CHECK(links::link_density(WeylPoint{{0.0, 1.0}}, WeylPoint{{1.5}}) == 0.0);
  CHECK(links::link_density(WeylPoint{{0.0, 1.0, 2.0}}, WeylPoint{{0.5, 1.5}}) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(links::link_density(WeylPoint{{1.0, 1.0}}, WeylPoint{{1.0}}), NumericError);
}

TEST_CASE("link density integrates to one over the interlacing polytope") {
  // N = 1: int_0^1 1 dy; N = 2 by iterated quadrature
  const WeylPoint x2{{0.0, 1.0}};
  CHECK(integrate([&](double y) { return links::link_density(x2, WeylPoint{{y}}); }, 0.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-6));
  const WeylPoint x3{{0.0, 0.7, 2.0}};
  const double mass = integrate(
      [&](double y1) {
        return integrate(
            [&](double y2) { return links::link_density(x3, WeylPoint{{y1, y2}}); }, 0.7, 2.0,
            600);
      },
      0.0, 0.7, 600);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("link sampler interlaces and matches the density on scalars") {
  RandomStream rng(1);
  const WeylPoint scalar{{2.0, 2.0, 2.0}};
  for (int rep = 0; rep < 10; ++rep) {
    const WeylPoint y = links::link_sample(scalar, rng);
    for (double v : y.values) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
  }
  for (int rep = 0; rep < 100000; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    WeylPoint x;
    x.values.resize(n + 1);
    for (double& v : x.values) v = rng.uniform(-3.0, 3.0);
    std::sort(x.values.begin(), x.values.end());
    REQUIRE(interlaces(links::link_sample(x, rng), x));
  }
  // uniform law on [0, 1] for the two-to-one link
  const std::size_t draws = 20000;
  std::vector<double> ys(draws);
  double mean = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    ys[i] = links::link_sample(WeylPoint{{0.0, 1.0}}, rng).values[0];
    mean += ys[i];
  }
  mean /= draws;
  CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * draws));
  CHECK(verify::ks_uniform(ys) < 0.015);
}

TEST_CASE("pattern sampler: interlacing and uniform first level") {
  RandomStream rng(2);
  const GTPattern single = links::gt_uniform_sample(WeylPoint{{0.3}}, rng);
  CHECK(single.depth() == 1);
  CHECK(single.level(1).values[0] == 0.3);
  for (int rep = 0; rep < 200; ++rep) {
    WeylPoint bottom;
    bottom.values.resize(4);
    for (double& v : bottom.values) v = rng.uniform(-3.0, 3.0);
    std::sort(bottom.values.begin(), bottom.values.end());
    CHECK(links::gt_uniform_sample(bottom, rng).interlacing());
  }
  std::vector<double> lvl1(20000);
  for (auto& v : lvl1)
    v = links::gt_uniform_sample(WeylPoint{{0.0, 1.0}}, rng).level(1).values[0];
  CHECK(verify::ks_uniform(lvl1) < 0.015);
}

TEST_CASE("dual-weighted kernel and its h-function") {
  const HPParams p{0.0, 0.0, 1};
  CHECK(links::lambda_hat_density(WeylPoint{{-1.0, 1.0}}, WeylPoint{{2.0}}, p) == 0.0);
  CHECK(links::lambda_hat_density(WeylPoint{{-1.0, 1.0}}, WeylPoint{{0.0}}, p) ==
        doctest::Approx(1.0));
  // kernel applied to the h-function gives Delta_{N+1}(x)/N!
  const WeylPoint x{{0.0, 1.0}};
  const double integral = integrate(
      [&](double y) {
        return links::lambda_hat_density(x, WeylPoint{{y}}, p) *
               links::lambda_hat_h_function(WeylPoint{{y}}, 2, p);
      },
      0.0, 1.0);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  // same identity with nonzero s and a wider interval
  const HPParams ps{0.7, -0.4, 1};
  const WeylPoint xs{{-0.5, 1.7}};
  const double integral_s = integrate(
      [&](double y) {
        return links::lambda_hat_density(xs, WeylPoint{{y}}, ps) *
               links::lambda_hat_h_function(WeylPoint{{y}}, 2, ps);
      },
      -0.5, 1.7);
  CHECK(integral_s == doctest::Approx(vandermonde(xs)).epsilon(1e-6));
}

TEST_CASE("boundary sampler special cases") {
  RandomStream rng(3);
  OmegaPoint scalar;
  scalar.gamma1 = -0.7;
  const WeylPoint v = links::boundary_link_sample(scalar, 3, rng);
  for (double z : v.values) CHECK(z == doctest::Approx(-0.7));
}

TEST_CASE("exact sampler: one-dimensional law is standard Cauchy") {
  RandomStream rng(4);
  const std::size_t draws = 100000;
  std::vector<double> u(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = links::hp_sample({0.0, 0.0, 1}, links::HPMethod::cue_cayley, rng).values[0];
    u[i] = 0.5 + std::atan(x) / M_PI;  // Cauchy CDF transform
  }
  CHECK(verify::ks_uniform(u) < 0.01);
}

TEST_CASE("exact sampler: sign-flip symmetry at real s") {
  RandomStream rng(5);
  const std::size_t draws = 20000;
  std::vector<double> a(draws * 2), b(draws * 2);
  for (std::size_t i = 0; i < draws; ++i) {
    const WeylPoint x = links::hp_sample({0.0, 0.0, 2}, links::HPMethod::cue_cayley, rng);
    a[2 * i] = x.values[0];
    a[2 * i + 1] = x.values[1];
    const WeylPoint y = links::hp_sample({0.0, 0.0, 2}, links::HPMethod::cue_cayley, rng);
    b[2 * i] = -y.values[1];
    b[2 * i + 1] = -y.values[0];
  }
  CHECK(verify::per_coordinate_ks(a, b, 2) < 0.02);
}

TEST_CASE("random-walk sampler agrees with the exact route at s=0") {
  RandomStream rng(6);
  const HPParams p{0.0, 0.0, 3};
  const std::size_t draws = 100000;
  links::MHConfig mh;  // defaults: burn-in 1e4, thinning 10
  const auto chain = links::hp_sample_chain(p, draws, rng, mh);
  std::vector<double> a(draws * 3), b(draws * 3);
  for (std::size_t i = 0; i < draws; ++i)
    for (int j = 0; j < 3; ++j) a[3 * i + j] = chain[i].values[j];
  for (std::size_t i = 0; i < draws; ++i) {
    const WeylPoint x = links::hp_sample(p, links::HPMethod::cue_cayley, rng);
    for (int j = 0; j < 3; ++j) b[3 * i + j] = x.values[j];
  }
  CHECK(verify::per_coordinate_ks(a, b, 3) < 0.02);
  CHECK_THROWS(links::hp_sample({1.0, 0.0, 2}, links::HPMethod::cue_cayley, rng));
  CHECK_THROWS(links::hp_sample({-0.6, 0.0, 2}, links::HPMethod::mh, rng));
}

TEST_CASE("circular ensemble angles") {
  RandomStream rng(7);
  std::vector<double> u(50000);
  for (auto& v : u) v = (links::cue_sample(1, rng)[0] + M_PI) / (2.0 * M_PI);
  CHECK(verify::ks_uniform(u) < 0.01);
  // gap sum around the circle forces the exact mean spacing
  for (int rep = 0; rep < 100; ++rep) {
    const auto angles = links::cue_sample(5, rng);
    double total = 2.0 * M_PI - (angles.back() - angles.front());
    for (std::size_t i = 1; i < angles.size(); ++i) total += angles[i] - angles[i - 1];
    CHECK(total == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  }
  // rotation invariance
  const std::size_t draws = 20000;
  std::vector<double> plain(draws * 3), rotated(draws * 3);
  const double phi = 1.234;
  for (std::size_t i = 0; i < draws; ++i) {
    auto a = links::cue_sample(3, rng);
    for (int j = 0; j < 3; ++j) plain[3 * i + j] = a[j];
    auto b = links::cue_sample(3, rng);
    for (auto& v : b) {
      v += phi;
      if (v > M_PI) v -= 2.0 * M_PI;
    }
    std::sort(b.begin(), b.end());
    for (int j = 0; j < 3; ++j) rotated[3 * i + j] = b[j];
  }
  CHECK(verify::per_coordinate_ks(plain, rotated, 3) < 0.015);
}

TEST_CASE("measure coherency under the link (reduced-size smoke)") {
  RandomStream rng(8);
  const std::size_t draws = 20000;
  std::vector<double> a(draws * 2), b(draws * 2);
  for (std::size_t i = 0; i < draws; ++i) {
    const WeylPoint x3 = links::hp_sample({0.0, 0.0, 3}, links::HPMethod::cue_cayley, rng);
    const WeylPoint y = links::link_sample(x3, rng);
    a[2 * i] = y.values[0];
    a[2 * i + 1] = y.values[1];
    const WeylPoint x2 = links::hp_sample({0.0, 0.0, 2}, links::HPMethod::cue_cayley, rng);
    b[2 * i] = x2.values[0];
    b[2 * i + 1] = x2.values[1];
  }
  CHECK(verify::per_coordinate_ks(a, b, 2) < 0.02);
}
