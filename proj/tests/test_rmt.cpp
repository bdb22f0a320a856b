#include <doctest.h>

#include <cmath>

#include "ilab/rmt.hpp"
#include "ilab/verify.hpp"

using namespace ilab;

TEST_CASE("haar unitary is unitary and has uniform phase at N=1") {
  RandomStream rng(42);
  for (int n : {1, 2, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      CHECK(rmt::is_unitary(rmt::haar_unitary(n, rng)));
    }
  }
  const std::size_t draws = 20000;
  std::vector<double> angles(draws);
  std::complex<double> mean = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto u = rmt::haar_unitary(1, rng);
    mean += u(0, 0);
    angles[i] = (std::arg(u(0, 0)) + M_PI) / (2.0 * M_PI);
  }
  CHECK(std::abs(mean) / static_cast<double>(draws) < 0.02);
  CHECK(verify::ks_uniform(angles) < 0.015);
}

TEST_CASE("eigenvalue extraction") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 2.0;
  const WeylPoint ev = rmt::eval(d);
  CHECK(ev.values[0] == doctest::Approx(-1.0));
  CHECK(ev.values[1] == doctest::Approx(2.0));
  CHECK(ev.values[2] == doctest::Approx(3.0));

  const Eigen::MatrixXcd scalar = 2.5 * Eigen::MatrixXcd::Identity(4, 4);
  for (double v : rmt::eval(scalar).values) CHECK(v == doctest::Approx(2.5));

  Eigen::MatrixXcd offdiag(2, 2);
  offdiag << 0.0, 1.0, 1.0, 0.0;
  const WeylPoint ev2 = rmt::eval(offdiag);
  CHECK(ev2.values[0] == doctest::Approx(-1.0));
  CHECK(ev2.values[1] == doctest::Approx(1.0));
}

TEST_CASE("eval is invariant under unitary conjugation") {
  RandomStream rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const auto h = rmt::gue_sample(4, 1.0, rng);
    const auto u = rmt::haar_unitary(4, rng);
    Eigen::MatrixXcd conj = u.adjoint() * h * u;
    rmt::hermitize(conj);
    const auto a = rmt::eval(h), b = rmt::eval(conj);
    for (int i = 0; i < 4; ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("corner projection and Cauchy interlacing") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  CHECK(rmt::corner(d, 3).isApprox(d));
  CHECK(rmt::corner(d, 2).rows() == 2);
  CHECK_THROWS(rmt::corner(d, 4));

  RandomStream rng(2);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 6);  // up to 7+1
    const auto h = rmt::gue_sample(n + 1, 1.0, rng);
    const WeylPoint big = rmt::eval(h);
    const WeylPoint small = rmt::eval(rmt::corner(h, n));
    REQUIRE(interlaces(small, big));
  }
}

TEST_CASE("gaussian hermitian moments") {
  RandomStream rng(3);
  CHECK(rmt::gue_sample(3, 0.0, rng).cwiseAbs().maxCoeff() == 0.0);
  const std::size_t draws = 20000;
  double tr2 = 0.0, tr2sq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto g = rmt::gue_sample(4, 1.0, rng);
    const double v = (g * g).trace().real();
    tr2 += v;
    tr2sq += v * v;
  }
  const double mean = tr2 / draws;
  const double se = std::sqrt((tr2sq / draws - mean * mean) / draws);
  // E[Tr X^2] = variance * N^2 = 16 at N=4 (invariant normalization)
  CHECK(std::abs(mean - 16.0) < 3.0 * se);
}

TEST_CASE("hermitian square root") {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  CHECK(rmt::hermitian_sqrt(id).isApprox(id, 1e-12));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const auto s = rmt::hermitian_sqrt(d);
  CHECK(s(0, 0).real() == doctest::Approx(2.0));
  CHECK(s(1, 1).real() == doctest::Approx(3.0));

  RandomStream rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = rmt::gue_sample(4, 1.0, rng);
    Eigen::MatrixXcd psd = g * g.adjoint();
    rmt::hermitize(psd);
    const auto r = rmt::hermitian_sqrt(psd);
    CHECK((r * r - psd).norm() / psd.norm() < 1e-8);
  }
  Eigen::MatrixXcd neg = -id;
  CHECK_THROWS_AS(rmt::hermitian_sqrt(neg), NumericError);
}

TEST_CASE("ergodic matrix sampler special cases") {
  RandomStream rng(5);
  OmegaPoint scalar;
  scalar.gamma1 = 1.5;
  const auto m = rmt::ergodic_matrix_sample(scalar, 3, rng);
  CHECK((m - 1.5 * Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  for (double v : rmt::eval(m).values) CHECK(v == doctest::Approx(1.5));

  // pure Gaussian component reduces to the Hermitian Gaussian ensemble
  OmegaPoint gauss;
  gauss.delta = 1.0;
  const std::size_t draws = 20000;
  double tr2 = 0.0, tr2sq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto g = rmt::ergodic_matrix_sample(gauss, 4, rng);
    const double v = (g * g).trace().real();
    tr2 += v;
    tr2sq += v * v;
  }
  const double mean = tr2 / draws;
  const double se = std::sqrt((tr2sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 16.0) < 3.0 * se);

  // single rank-one component: eigenvalue -a with multiplicity N-1, zero-mean trace
  OmegaPoint rank1;
  rank1.alpha_plus = {0.8};
  rank1.delta = 0.64;
  double tr = 0.0, trsq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto g = rmt::ergodic_matrix_sample(rank1, 3, rng);
    const WeylPoint ev = rmt::eval(g);
    CHECK(ev.values[0] == doctest::Approx(-0.8).epsilon(1e-9));
    CHECK(ev.values[1] == doctest::Approx(-0.8).epsilon(1e-9));
    const double v = g.trace().real();
    tr += v;
    trsq += v * v;
  }
  const double mean_tr = tr / draws;
  const double se_tr = std::sqrt((trsq / draws - mean_tr * mean_tr) / draws);
  CHECK(std::abs(mean_tr) < 3.0 * se_tr);
}
