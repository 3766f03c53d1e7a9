#pragma once

#include "rescat/analytic_potential.hpp"

namespace rescat {

/// Potential truncated at the matching radius: V(r) for r < r_cut, exactly
/// zero beyond.
struct TruncatedPotential {
  AnalyticPotential potential;
  double r_cut;

  double operator()(double r) const { return r < r_cut ? potential(r) : 0.0; }
};

}  // namespace rescat
