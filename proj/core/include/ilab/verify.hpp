#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ilab/types.hpp"

namespace ilab::verify {

// Two-sided two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample statistic against the uniform law on (0, 1).
double ks_uniform(std::span<const double> u);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mc_mean_with_se(std::span<const double> draws);

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  long long n_samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string details;
};

std::string reports_to_json(const std::vector<TestReport>& reports);

// Thresholds and gates; every tolerance a suite asserts lives here.
struct Thresholds {
  double eigenfunction_residual = 1e-9;
  double ks_invariance = 0.015;
  double sigma_gate = 3.0;             // Monte-Carlo comparisons: 3 combined SE
  double ks_coherency = 0.01;
  double ks_boundary_coherency = 0.01;
  double eq26_gap = 5e-3;
  double siegmund_pde_gap = 1e-3;
  double block_kernel_gap = 1e-2;
  double h_transform_gap = 1e-3;
  double ks_gibbs = 0.02;
  double gibbs_control_min = 0.1;      // frozen-coupling control must exceed this
  double boundary_flow_factor = 5.0;   // tolerance 5/sqrt(N) for boundary flows
  double ks_matrix = 0.02;
  double ks_cue_invariance = 0.015;
  double ks_cue_modes = 0.02;
  double ks_approximation = 0.1;
  std::size_t power_floor = 1000;      // fewer samples => inconclusive, not pass
};

struct SuiteConfig {
  std::uint64_t seed = 20240809;
  int workers = 0;          // 0 = hardware concurrency
  std::size_t samples = 0;  // 0 = suite default
  double dt = 0.0;          // 0 = suite default
  double t_final = 0.0;     // 0 = suite default
  double grid_h = 0.0;      // 0 = suite default (0.01)
  double domain_a = 0.0;    // 0 = suite default (8)
  Thresholds thresholds{};
};

// Named verification suites; deterministic given (seed, config).
// Known names: eigenfunction, invariance, intertwining-mc, coherency,
// boundary-coherency, duality, eq26, block-kernel, h-transform, gibbs,
// boundary-dbm, boundary-ou, matrix-vs-vector, cue, approximation.
std::vector<TestReport> suite(const std::string& name, const SuiteConfig& config);

std::vector<std::string> suite_names();

// Max over coordinates of the two-sample KS distance between the sorted
// coordinate marginals of two row-major ensembles.
double per_coordinate_ks(std::span<const double> a, std::span<const double> b, int dim);

}  // namespace ilab::verify
