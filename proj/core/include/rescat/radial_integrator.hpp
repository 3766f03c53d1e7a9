#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rescat/chain_spec.hpp"
#include "rescat/truncated_potential.hpp"

namespace rescat {

struct LogDerivative {
  Complex gamma;  // psi'(r_cut) / psi(r_cut)
  Complex k;
  double r_cut;
};

/// Wavefunction data at the matching radius; node-free alternative to the
/// logarithmic derivative (gamma blows up at nodes of psi, this does not).
struct WaveAtMatch {
  Complex psi;
  Complex dpsi;
  double r_cut;
};

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double origin_eps = 1e-6;  // integration starts at r = eps with psi ~ r
  std::size_t max_steps = 2'000'000;
};

/// Piecewise-Chebyshev proxy of a truncated potential on [0, r_cut].  The
/// two-resonance closed form runs in binary128 and costs ~15 us per call;
/// grid searches integrate through this table instead (absolute accuracy
/// ~1e-12, validated in the test suite).
class PotentialTable {
public:
  explicit PotentialTable(const TruncatedPotential& tp, double tol = 1e-12);

  double operator()(double r) const;
  double r_cut() const { return r_cut_; }

private:
  struct Panel {
    double lo, hi;
    std::vector<double> coef;  // Chebyshev coefficients on [lo, hi]
  };
  std::vector<Panel> panels_;
  double r_cut_;
};

/// Integrates psi'' = (V - k^2) psi outward from the origin (Dirichlet seed
/// psi ~ r) to r_cut with an adaptive embedded Runge-Kutta pair; supports
/// complex momentum.  Throws IntegratorFailure if step control collapses.
WaveAtMatch integrate_radial(const TruncatedPotential& tp, Complex k,
                             const IntegratorOptions& opt = {});

/// Same, sampling the potential through a prebuilt table (fast path for grid
/// searches).
WaveAtMatch integrate_radial(const PotentialTable& table, Complex k,
                             const IntegratorOptions& opt = {});

/// gamma = psi'/psi at the matching radius.  Throws NodeAtMatching when psi
/// is too small for the ratio to mean anything; root searches use the
/// node-free residual instead.
LogDerivative integrate_log_derivative(const TruncatedPotential& tp, Complex k,
                                       const IntegratorOptions& opt = {});

}  // namespace rescat
