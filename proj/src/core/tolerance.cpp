#include "polylip/tolerance.hpp"

namespace polylip {
namespace {
Tolerance& global_policy() {
  static Tolerance policy;
  return policy;
}
}  // namespace

const Tolerance& tolerance() { return global_policy(); }

void set_tolerance(double tau) { global_policy() = Tolerance(tau); }

ScopedTolerance::ScopedTolerance(double tau) : previous_(tolerance().tau()) {
  set_tolerance(tau);
}

ScopedTolerance::~ScopedTolerance() { set_tolerance(previous_); }

}  // namespace polylip
