#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rescat/lattice_model.hpp"

namespace rescat {

/// One in-band scattering solve.
struct ScatteringResult {
  double energy;
  double k;
  Complex s;
  double delta;  // principal value in (-pi/2, pi/2]; sweeps unwrap
};

/// log |Det[E - H_eff(E)]| and arg of the determinant, computed by the
/// rescaled three-term recurrence (the raw recurrence overflows near N=500).
struct LogDet {
  double log_abs;
  double arg;
};

/// Full spectrum of the complex-symmetric H_eff(E) with eigenvectors
/// normalized by the unconjugated bilinear form phi^T phi = 1.
struct EigenpairSet {
  std::vector<Complex> eigenvalues;  // sorted by real part
  Eigen::MatrixXcd eigenvectors;     // columns match eigenvalues
  double evaluated_at = 0.0;
  double biorthogonality_defect = 0.0;  // max |phi_l^T phi_m| over sampled pairs
  bool defective = false;  // defect beyond tolerance: near an exceptional point
};

/// Diagonal of E - H_eff(E); the corner entry carries the lead self-energy
/// t e^{ika} through k(E).
std::vector<Complex> shifted_diagonal(const LatticeModel& model, Complex energy);

/// Solves (E - H_eff) Psi = b for the lead-driven source and extracts the
/// one-channel S matrix from psi_N = e^{-ikr_N} - S e^{ikr_N}.
/// E must lie strictly inside the band.
ScatteringResult solve_scattering(const LatticeModel& model, double energy);

/// Scattering sweep over ascending in-band energies with the phase shift
/// unwrapped continuously (pinned to 0 at the band bottom).
std::vector<ScatteringResult> scattering_sweep(const LatticeModel& model,
                                               std::span<const double> energies);

LogDet log_determinant(const LatticeModel& model, Complex energy);

struct EigenOptions {
  bool with_vectors = true;
  double defect_tol = 1e-8;
};

EigenpairSet eigenvalues_at(const LatticeModel& model, double energy,
                            const EigenOptions& opt = {});

/// Complex tridiagonal solve (partial pivoting) for rows
/// sub[i] x_{i-1} + diag[i] x_i + sup[i] x_{i+1} = rhs[i]; sub[0] and
/// sup[n-1] are ignored.  Throws SingularSystem on a vanishing pivot.
std::vector<Complex> solve_tridiagonal(std::span<const Complex> sub,
                                       std::span<const Complex> diag,
                                       std::span<const Complex> sup,
                                       std::vector<Complex> rhs);

/// Eigenpair of H_eff(E) nearest the shift, by inverse iteration on the
/// tridiagonal matrix (O(N) per step).  Warm-startable with a previous
/// eigenvector; used for branch tracking in the fixed-point solver.
struct TrackedEigenpair {
  Complex eigenvalue;
  Eigen::VectorXcd vector;  // normalized phi^T phi = 1 when possible
  bool self_orthogonal = false;  // |phi^T phi| ~ 0: exceptional-point vicinity
};

TrackedEigenpair nearest_eigenpair(const LatticeModel& model, double energy,
                                   Complex shift,
                                   const Eigen::VectorXcd* warm_start = nullptr);

}  // namespace rescat
