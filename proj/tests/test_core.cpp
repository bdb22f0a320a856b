#include <doctest.h>

#include <cmath>
#include <complex>

#include "ilab/core.hpp"
#include "ilab/random.hpp"

using namespace ilab;

TEST_CASE("cayley transform") {
  CHECK(cayley_to_angle(0.0) == 0.0);
  CHECK(cayley_to_angle(1.0) == doctest::Approx(M_PI / 2.0));
  CHECK(cayley_to_angle(2.5) == doctest::Approx(2.3805798993650633).epsilon(1e-12));
  RandomStream rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double x = std::tan(rng.uniform(-1.5, 1.5));
    CHECK(angle_to_cayley(cayley_to_angle(x)) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("vandermonde values") {
  CHECK(vandermonde(WeylPoint{{5.0}}) == 1.0);
  CHECK(vandermonde(WeylPoint{{0.0, 1.0}}) == 1.0);
  CHECK(vandermonde(WeylPoint{{0.0, 1.0, 3.0}}) == doctest::Approx(6.0));
}

TEST_CASE("vandermonde derivatives match finite differences") {
  RandomStream rng(7);
  for (int n = 2; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      WeylPoint x;
      x.values.resize(n);
      for (double& v : x.values) v = rng.uniform(-3.0, 3.0);
      std::sort(x.values.begin(), x.values.end());
      bool ok = true;
      for (int i = 1; i < n; ++i)
        if (x.values[i] - x.values[i - 1] < 0.05) ok = false;
      if (!ok) {
        --rep;
        continue;
      }
      const auto grad = vandermonde_grad(x);
      const auto second = vandermonde_second(x);
      const double h = 1e-5;
      for (int i = 0; i < n; ++i) {
        WeylPoint xp = x, xm = x;
        xp.values[i] += h;
        xm.values[i] -= h;
        const double fd1 = (vandermonde(xp) - vandermonde(xm)) / (2 * h);
        const double fd2 = (vandermonde(xp) - 2 * vandermonde(x) + vandermonde(xm)) / (h * h);
        CHECK(grad[i] == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(second[i] == doctest::Approx(fd2).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("karlin-mcgregor eigenvalue constants") {
  CHECK(km_eigenvalue(1, 0.0) == 0.0);
  CHECK(km_eigenvalue(1, 3.7) == 0.0);
  CHECK(km_eigenvalue(2, 0.0) == doctest::Approx(-2.0));
  CHECK(km_eigenvalue(3, 1.0) == doctest::Approx(-16.0));
  CHECK(dual_constant(2, 0.0) == doctest::Approx(-4.0));
  CHECK(dual_constant(1, -1.0) == doctest::Approx(0.0));
  CHECK(km_eigenvalue(3, 0.0) ==
        doctest::Approx(km_eigenvalue(2, 0.0) + 2.0 * dual_constant(2, 0.0)));
}

TEST_CASE("eigenvalue recursion holds exactly up to N=50") {
  for (double s_re : {-0.4, 0.0, 1.0, 2.7}) {
    for (int n = 1; n <= 50; ++n) {
      CHECK(km_eigenvalue(n + 1, s_re) ==
            doctest::Approx(km_eigenvalue(n, s_re) + n * dual_constant(n, s_re)).epsilon(1e-14));
    }
  }
}

TEST_CASE("embedding into boundary coordinates") {
  const OmegaPoint zero = embed(WeylPoint{{0.0, 0.0, 0.0}});
  CHECK(zero.gamma1 == 0.0);
  CHECK(zero.delta == 0.0);
  for (double a : zero.alpha_plus) CHECK(a == 0.0);

  const OmegaPoint w = embed(WeylPoint{{-3.0, 1.0}});
  REQUIRE(w.alpha_plus.size() == 2);
  CHECK(w.alpha_plus[0] == doctest::Approx(0.5));
  CHECK(w.alpha_plus[1] == 0.0);
  CHECK(w.alpha_minus[0] == doctest::Approx(1.5));
  CHECK(w.alpha_minus[1] == 0.0);
  CHECK(w.gamma1 == doctest::Approx(-1.0));
  CHECK(w.delta == doctest::Approx(2.5));
  CHECK(w.valid());

  RandomStream rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    WeylPoint x;
    x.values.resize(5);
    for (double& v : x.values) v = rng.uniform(-4.0, 4.0);
    std::sort(x.values.begin(), x.values.end());
    const OmegaPoint om = embed(x);
    double mean = 0.0, plus = 0.0, minus = 0.0;
    for (double v : x.values) mean += v / 5.0;
    for (double a : om.alpha_plus) plus += a;
    for (double a : om.alpha_minus) minus += a;
    CHECK(om.gamma1 == doctest::Approx(mean).epsilon(1e-12));
    CHECK(om.gamma1 == doctest::Approx(plus - minus).epsilon(1e-12));
    CHECK(om.valid(1e-9));
  }
}

TEST_CASE("characteristic function") {
  OmegaPoint zero;
  CHECK(charfunc(zero, 1.7) == std::complex<double>(1.0, 0.0));

  OmegaPoint drift;
  drift.gamma1 = 1.0;
  const auto f = charfunc(drift, 0.7);
  CHECK(f.real() == doctest::Approx(std::cos(0.7)));
  CHECK(f.imag() == doctest::Approx(std::sin(0.7)));

  OmegaPoint alpha;
  alpha.alpha_plus = {2.0};
  alpha.delta = 4.0;
  const auto g = charfunc(alpha, 1.0);
  const std::complex<double> expected =
      std::exp(std::complex<double>(0.0, -2.0)) / std::complex<double>(1.0, -2.0);
  CHECK(g.real() == doctest::Approx(expected.real()).epsilon(1e-12));
  CHECK(g.imag() == doctest::Approx(expected.imag()).epsilon(1e-12));
  CHECK(std::abs(g) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));

  RandomStream rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    OmegaPoint om;
    om.alpha_plus = {rng.uniform(0.0, 2.0)};
    om.alpha_minus = {rng.uniform(0.0, 2.0)};
    om.gamma1 = rng.uniform(-2.0, 2.0);
    om.delta = om.alpha_square_sum() + rng.uniform(0.0, 1.0);
    const double x = rng.uniform(-5.0, 5.0);
    CHECK(std::abs(charfunc(om, x)) <= 1.0 + 1e-12);
    CHECK(std::abs(charfunc(om, 0.0) - 1.0) < 1e-14);
  }
}

TEST_CASE("unnormalized log density") {
  CHECK(hp_log_density_unnorm(WeylPoint{{0.0}}, {0.0, 0.0, 1}) == doctest::Approx(0.0));
  CHECK(hp_log_density_unnorm(WeylPoint{{0.0, 1.0}}, {0.0, 0.0, 2}) ==
        doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(hp_log_density_unnorm(WeylPoint{{1.0, 1.0}}, {0.0, 0.0, 2}), NumericError);

  // symmetry under x -> -reverse(x), s_im -> -s_im
  RandomStream rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    WeylPoint x;
    x.values.resize(3);
    for (double& v : x.values) v = rng.uniform(-3.0, 3.0);
    std::sort(x.values.begin(), x.values.end());
    if (!x.strictly_ordered()) continue;
    WeylPoint xr;
    xr.values = {-x.values[2], -x.values[1], -x.values[0]};
    const HPParams p{0.3, 0.8, 3};
    const HPParams pr{0.3, -0.8, 3};
    CHECK(hp_log_density_unnorm(x, p) ==
          doctest::Approx(hp_log_density_unnorm(xr, pr)).epsilon(1e-10));
  }
}

TEST_CASE("speed densities") {
  const HPParams p0{0.0, 0.0, 1};
  CHECK(speed_density(0.0, 1, p0, false) == 1.0);
  CHECK(speed_density(0.0, 2, p0, true) == 1.0);
  CHECK(speed_density(1.0, 2, {0.0, 0.0, 2}, true) == doctest::Approx(2.0));
  CHECK(speed_density(1.0, 1, p0, false) == doctest::Approx(0.5));
  RandomStream rng(9);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = rng.uniform(-4.0, 4.0);
    const HPParams p{0.7, -1.3, 3};
    CHECK(speed_density(x, 3, p, false) * speed_density(x, 3, p, true) ==
          doctest::Approx(1.0 / (1.0 + x * x)).epsilon(1e-12));
  }
}
