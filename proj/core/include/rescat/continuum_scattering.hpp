#pragma once

#include <span>
#include <vector>

#include "rescat/pole_estimate.hpp"
#include "rescat/radial_integrator.hpp"
#include "rescat/truncated_potential.hpp"

namespace rescat {

/// Phase shift of the truncated potential at a single momentum, principal
/// branch in (-pi/2, pi/2].  The matching condition only defines delta mod pi;
/// use cutoff_phase_shift_curve for a branch-continuous sweep.
double cutoff_phase_shift(const TruncatedPotential& tp, double k);

/// Branch-continuous phase-shift curve over an ascending momentum grid,
/// pinned to delta -> 0 as k -> 0+.
std::vector<double> cutoff_phase_shift_curve(const TruncatedPotential& tp,
                                             std::span<const double> k_grid);

/// S(k) = e^{-2ikR} (k - i gamma)/(k + i gamma); unimodular for real k.
Complex s_matrix_cut(const TruncatedPotential& tp, double k);

struct TranscendentalSearchOptions {
  double residual_tol = 1e-8;  // on |gamma - ik|
  double dedup_tol = 1e-6;
  int max_newton_iterations = 60;
  IntegratorOptions integrator{};
};

struct TranscendentalSearchResult {
  std::vector<PoleEstimate> poles;
  int seeds_tried = 0;
  int seeds_failed = 0;  // dropped with NoConvergence
};

/// Poles of the truncated potential's S matrix: zeros of gamma(k) - ik.
/// Seeds come from sign changes of the node-free residual
/// g(k) = psi'(R) - ik psi(R) on a grid over the energy window (mapped
/// through k = sqrt(E) on the resonance sheet: Re k > 0, Im k <= 0); each
/// seed is refined by damped Newton on g.
TranscendentalSearchResult find_transcendental_poles(
    const TruncatedPotential& tp, const Rectangle& region, const GridSize& grid,
    const TranscendentalSearchOptions& opt = {});

/// Newton refinement of a single pole from a k-plane seed; exposed for the
/// mirror-symmetry checks.  Returns the refined momentum.
Complex refine_transcendental_pole_k(const TruncatedPotential& tp, Complex k_seed,
                                     const TranscendentalSearchOptions& opt = {});

}  // namespace rescat
