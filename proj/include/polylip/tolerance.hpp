#pragma once

#include <cmath>

namespace polylip {

/// Single tolerance policy used for every tightness, feasibility and
/// rank decision in the library.
class Tolerance {
 public:
  explicit Tolerance(double tau = 1e-9) : tau_(tau) {}

  double tau() const { return tau_; }

  bool is_zero(double v) const { return std::abs(v) <= tau_; }
  bool leq(double a, double b) const { return a <= b + tau_; }
  bool geq(double a, double b) const { return a + tau_ >= b; }
  // Strict side of a relatively open cell: slack must exceed tau.
  bool strictly_less(double a, double b) const { return a < b - tau_; }
  bool equal(double a, double b) const { return std::abs(a - b) <= tau_; }
  // Scale-aware zero test for quantities that grow with |scale|.
  bool is_zero_rel(double v, double scale) const {
    return std::abs(v) <= tau_ * std::max(1.0, std::abs(scale));
  }

 private:
  double tau_;
};

/// Process-wide policy. Defaults to tau = 1e-9.
const Tolerance& tolerance();

/// Replaces the process-wide policy. Intended for start-up configuration
/// (CLI flags, POLYLIP_TOL); not for use while other threads compute.
void set_tolerance(double tau);

/// RAII override, mostly for tests.
class ScopedTolerance {
 public:
  explicit ScopedTolerance(double tau);
  ~ScopedTolerance();
  ScopedTolerance(const ScopedTolerance&) = delete;
  ScopedTolerance& operator=(const ScopedTolerance&) = delete;

 private:
  double previous_;
};

}  // namespace polylip
