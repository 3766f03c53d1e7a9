#include "rescat/lattice_model.hpp"

#include <cmath>
#include <sstream>

#include "rescat/errors.hpp"

namespace rescat {

LatticeModel discretize(const TruncatedPotential& tp, double a, double radius) {
  if (!(a > 0.0)) throw MisalignedRadius("lattice constant must be positive");
  const double ratio = radius / a;
  const double n_real = std::round(ratio);
  if (std::abs(ratio - n_real) > 1e-6 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "R = " << radius << " is not a lattice multiple of a = " << a;
    throw MisalignedRadius(msg.str());
  }
  const int n = static_cast<int>(n_real);
  if (n < 1) throw MisalignedRadius("lattice needs at least one site");
  if (radius < tp.r_cut - 0.5 * a)
    throw MisalignedRadius("lead must attach at or beyond the truncation radius");

  LatticeModel model;
  model.a = a;
  model.t = 1.0 / (a * a);
  model.n_sites = n;
  model.site_potential.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double r = i * a;
    model.site_potential[i - 1] = r < tp.r_cut ? tp.potential(r) : 0.0;
  }
  return model;
}

Complex dispersion_k(Complex energy, const LatticeModel& model) {
  const Complex z = 1.0 - energy / (2.0 * model.t);
  if (energy.imag() == 0.0 && energy.real() > 0.0 &&
      energy.real() < model.band_top()) {
    // In-band: k a = arccos(z) with z in (-1, 1), real positive momentum.
    return std::acos(z.real()) / model.a;
  }
  // Principal complex arccos: for Im E < 0, Im z > 0 and Im(acos z) < 0,
  // which is the analytic continuation of the in-band branch onto the
  // resonance sheet.
  return std::acos(z) / model.a;
}

}  // namespace rescat
