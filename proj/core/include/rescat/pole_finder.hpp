#pragma once

#include <functional>
#include <vector>

#include "rescat/effective_hamiltonian.hpp"
#include "rescat/pole_estimate.hpp"

namespace rescat {

struct DetSearchOptions {
  double residual_tol = 1e-9;  // on the locally normalized determinant
  double dedup_tol = 1e-6;
  int max_newton_iterations = 60;
  /// Re-run with a doubled seeding grid and require the refined pole set to
  /// match within dedup_tol; throws GridTooCoarse otherwise.
  bool verify_grid_refinement = false;
};

struct DetSearchResult {
  std::vector<PoleEstimate> poles;
  int seeds_tried = 0;
  int seeds_failed = 0;
};

/// Zeros of Det[E - H_eff(E)] inside the window: the determinant field is
/// evaluated on the grid, zero-level curves of its real and imaginary parts
/// are extracted per cell (marching squares on the locally rescaled values),
/// curve intersections seed a damped Newton iteration on the full energy
/// dependence.
DetSearchResult det_poles(const LatticeModel& model, const Rectangle& region,
                          const GridSize& grid, const DetSearchOptions& opt = {});

/// Convenience wrapper building the lattice at the given cutoff radius first.
DetSearchResult det_poles(const std::function<LatticeModel(double)>& model_builder,
                          double r_cut, const Rectangle& region, const GridSize& grid,
                          const DetSearchOptions& opt = {});

/// Determinant field dump for contour plotting: row-major log|Det| and
/// arg Det over the grid.
struct DetField {
  Rectangle region;
  GridSize grid;
  std::vector<LogDet> values;  // index j * n_re + i
};
DetField determinant_field(const LatticeModel& model, const Rectangle& region,
                           const GridSize& grid);

struct FixedPointOptions {
  double relaxation = 0.5;  // 0.5 suppresses two-cycles; 1.0 is plain iteration
  double tol = 1e-9;        // on the energy update
  int max_iterations = 200;
  double overlap_threshold = 0.5;
};

/// Fixed point of E = Re z_lambda(E): damped iteration with the eigenvalue
/// branch tracked by maximal unconjugated eigenvector overlap between steps.
/// Returns the pole estimate E_lambda + i Im z_lambda(E_lambda) (the width is
/// Gamma = -2 Im z).  Throws NoConvergence or BranchLoss.
PoleEstimate fixed_point_solve(const LatticeModel& model, double seed_energy,
                               const FixedPointOptions& opt = {});

/// Same, but starting the eigenvalue tracking from a complex shift (used to
/// continue a known family across models).
PoleEstimate fixed_point_solve_from(const LatticeModel& model, double seed_energy,
                                    Complex shift, const FixedPointOptions& opt = {});

}  // namespace rescat
