#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilab {

// Error raised when a numerical procedure leaves its validity region
// (mass defect too large, step-size control exhausted, non-PSD input).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Point of the closed Weyl chamber: weakly ordered real coordinates.
// Holds eigenvalue and particle configurations throughout the library.
struct WeylPoint {
  std::vector<double> values;

  WeylPoint() = default;
  explicit WeylPoint(std::vector<double> v) : values(std::move(v)) {}

  int n() const { return static_cast<int>(values.size()); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  bool weakly_ordered() const {
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] < values[i - 1]) return false;
    return true;
  }
  bool strictly_ordered() const {
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] <= values[i - 1]) return false;
    return true;
  }
};

// y interlaces x:  x_1 <= y_1 <= x_2 <= ... <= y_N <= x_{N+1}.
inline bool interlaces(const WeylPoint& y, const WeylPoint& x) {
  if (x.n() != y.n() + 1) return false;
  for (int i = 0; i < y.n(); ++i) {
    if (y.values[i] < x.values[i] || y.values[i] > x.values[i + 1]) return false;
  }
  return true;
}

// Complex parameter s (stored by real/imaginary part) and level N.
struct HPParams {
  double s_re = 0.0;
  double s_im = 0.0;
  int n = 1;
};

// Boundary coordinates (alpha+, alpha-, gamma1, delta) with finitely many
// stored alpha entries and an implicit zero tail.  gamma2 is derived.
struct OmegaPoint {
  std::vector<double> alpha_plus;   // nonincreasing, >= 0
  std::vector<double> alpha_minus;  // nonincreasing, >= 0
  double gamma1 = 0.0;
  double delta = 0.0;

  double alpha_square_sum() const {
    double s = 0.0;
    for (double a : alpha_plus) s += a * a;
    for (double a : alpha_minus) s += a * a;
    return s;
  }
  double gamma2() const { return delta - alpha_square_sum(); }

  // Checks the defining constraints; tol absorbs roundoff from embeddings.
  bool valid(double tol = 1e-12) const {
    auto nonincreasing_nonneg = [](const std::vector<double>& a) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0.0) return false;
        if (i > 0 && a[i] > a[i - 1]) return false;
      }
      return true;
    };
    if (!nonincreasing_nonneg(alpha_plus) || !nonincreasing_nonneg(alpha_minus)) return false;
    return gamma2() >= -tol;
  }
};

// Triangular interlacing array; level n (1-based) has n entries.
struct GTPattern {
  std::vector<WeylPoint> levels;

  int depth() const { return static_cast<int>(levels.size()); }
  WeylPoint& level(int n) { return levels[static_cast<std::size_t>(n - 1)]; }
  const WeylPoint& level(int n) const { return levels[static_cast<std::size_t>(n - 1)]; }

  bool interlacing() const {
    for (int n = 1; n <= depth(); ++n) {
      if (level(n).n() != n) return false;
      if (n > 1 && !interlaces(level(n - 1), level(n))) return false;
    }
    return true;
  }
};

}  // namespace ilab
