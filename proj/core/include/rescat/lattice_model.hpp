#pragma once

#include <vector>

#include "rescat/chain_spec.hpp"
#include "rescat/truncated_potential.hpp"

namespace rescat {

/// Uniform radial lattice for the box [0, R] with Dirichlet wall at r = 0
/// (site 0 absent) and a semi-infinite lead attached at r_N = R.
struct LatticeModel {
  double a = 0.01;               // lattice constant
  double t = 1e4;                // hopping, t = 1/a^2 exactly
  int n_sites = 0;               // N, sites at r_i = i a, i = 1..N
  std::vector<double> site_potential;  // U_i = V_cut(r_i)

  double radius() const { return n_sites * a; }
  double band_top() const { return 4.0 * t; }
  double site_r(int i) const { return i * a; }  // i is 1-based
};

/// Samples the truncated potential on the lattice.  R must be a lattice
/// multiple (throws MisalignedRadius) and at least r_cut, so the lead attaches
/// in the zero-potential region.
LatticeModel discretize(const TruncatedPotential& tp, double a, double radius);

/// Tight-binding dispersion k(E) with E = 2t(1 - cos(ka)): real and positive
/// inside the band E in (0, 4t), continued onto the resonance sheet
/// (Im k <= 0) for Im E < 0.  The principal arccos implements exactly that
/// continuation from the in-band segment.
Complex dispersion_k(Complex energy, const LatticeModel& model);

}  // namespace rescat
