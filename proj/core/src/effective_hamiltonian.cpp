#include "rescat/effective_hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rescat/errors.hpp"
#include "rescat/numeric_util.hpp"
#include "rescat/parallel.hpp"

namespace rescat {
namespace {

constexpr Complex kI(0.0, 1.0);

// Deterministic dense start vector for inverse iteration.
Eigen::VectorXcd start_vector(int n) {
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i)
    x[i] = Complex(std::sin(0.7 * i + 0.1), std::cos(1.3 * i + 0.2));
  return x;
}

// y = H_eff(E) x for the tridiagonal Hamiltonian; corner carries the lead term.
void apply_heff(const LatticeModel& model, Complex corner, const Eigen::VectorXcd& x,
                Eigen::VectorXcd& y) {
  const int n = model.n_sites;
  const double t = model.t;
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    Complex v = (model.site_potential[i] + 2.0 * t) * x[i];
    if (i + 1 < n) v -= t * x[i + 1];
    if (i > 0) v -= t * x[i - 1];
    y[i] = v;
  }
  y[n - 1] += (corner - (model.site_potential[n - 1] + 2.0 * t)) * x[n - 1];
}

Complex corner_term(const LatticeModel& model, Complex energy) {
  const Complex ka = dispersion_k(energy, model) * model.a;
  return model.site_potential[model.n_sites - 1] + 2.0 * model.t -
         model.t * std::exp(kI * ka);
}

// Bilinear (unconjugated) normalization phi^T phi = 1; falls back to the
// Hermitian norm near self-orthogonal vectors.
bool bilinear_normalize(Eigen::VectorXcd& x) {
  const Complex n2 = (x.transpose() * x)(0, 0);
  const double h2 = x.squaredNorm();
  if (std::abs(n2) < 1e-10 * h2) {
    x /= std::sqrt(h2);
    return false;
  }
  x /= std::sqrt(n2);
  return true;
}

}  // namespace

std::vector<Complex> shifted_diagonal(const LatticeModel& model, Complex energy) {
  const int n = model.n_sites;
  std::vector<Complex> diag(n);
  for (int i = 0; i < n; ++i)
    diag[i] = energy - (model.site_potential[i] + 2.0 * model.t);
  diag[n - 1] = energy - corner_term(model, energy);
  return diag;
}

std::vector<Complex> solve_tridiagonal(std::span<const Complex> sub,
                                       std::span<const Complex> diag,
                                       std::span<const Complex> sup,
                                       std::vector<Complex> rhs) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  std::vector<Complex> d(n), u1(n, 0.0), u2(n, 0.0);

  // Active row spans columns (i, i+1, i+2); partial pivoting against the next
  // original row introduces the second superdiagonal fill-in.
  Complex p = diag[0];
  Complex q = n > 1 ? sup[0] : Complex(0.0);
  Complex s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) {
      Complex p2 = sub[i + 1];
      Complex q2 = diag[i + 1];
      Complex s2 = (i + 2 < n) ? sup[i + 1] : Complex(0.0);
      if (std::abs(p2) > std::abs(p)) {
        std::swap(p, p2);
        std::swap(q, q2);
        std::swap(s, s2);
        std::swap(rhs[i], rhs[i + 1]);
      }
      if (p == Complex(0.0)) throw SingularSystem("zero pivot in tridiagonal solve");
      const Complex m = p2 / p;
      q2 -= m * q;
      s2 -= m * s;
      rhs[i + 1] -= m * rhs[i];
      d[i] = p;
      u1[i] = q;
      u2[i] = s;
      p = q2;
      q = s2;
      s = 0.0;
    } else {
      if (p == Complex(0.0)) throw SingularSystem("zero pivot in tridiagonal solve");
      d[i] = p;
    }
  }

  std::vector<Complex> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Complex v = rhs[i];
    if (i + 1 < n) v -= u1[i] * x[i + 1];
    if (i + 2 < n) v -= u2[i] * x[i + 2];
    x[i] = v / d[i];
  }
  return x;
}

ScatteringResult solve_scattering(const LatticeModel& model, double energy) {
  if (!(energy > 0.0 && energy < model.band_top()))
    throw Error("scattering energy must lie strictly inside the band (0, 4t)");
  const int n = model.n_sites;
  const double t = model.t;
  const double ka = std::acos(1.0 - energy / (2.0 * t));
  const double k = ka / model.a;
  const double r_n = model.radius();

  std::vector<Complex> sub(n, Complex(t)), sup(n, Complex(t));
  std::vector<Complex> diag = shifted_diagonal(model, energy);
  std::vector<Complex> rhs(n, Complex(0.0));
  rhs[n - 1] = 2.0 * kI * t * std::exp(-kI * k * r_n) * std::sin(ka);

  const std::vector<Complex> psi = solve_tridiagonal(sub, diag, sup, std::move(rhs));
  const Complex s = (std::exp(-kI * k * r_n) - psi[n - 1]) * std::exp(-kI * k * r_n);
  const double delta = wrap_to_period(std::arg(s) / 2.0, kPi);
  return {energy, k, s, delta};
}

std::vector<ScatteringResult> scattering_sweep(const LatticeModel& model,
                                               std::span<const double> energies) {
  std::vector<ScatteringResult> out(energies.size());
  parallel_for(energies.size(),
               [&](std::size_t i) { out[i] = solve_scattering(model, energies[i]); });
  std::vector<double> principal(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) principal[i] = out[i].delta;
  const auto unwrapped = unwrap_sequence(principal, kPi, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].delta = unwrapped[i];
  return out;
}

LogDet log_determinant(const LatticeModel& model, Complex energy) {
  const std::vector<Complex> diag = shifted_diagonal(model, energy);
  const double t2 = model.t * model.t;

  // D_i = (E - d_i) D_{i-1} - t^2 D_{i-2}, rescaled every step; log magnitude
  // accumulates separately, the phase stays in the mantissa pair.
  double log_scale = 0.0;
  Complex dm1(1.0, 0.0), dm2(0.0, 0.0);
  for (const Complex& d : diag) {
    const Complex di = d * dm1 - t2 * dm2;
    const double s = std::max(std::abs(di), std::abs(dm1));
    if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    dm2 = dm1 / s;
    dm1 = di / s;
    log_scale += std::log(s);
  }
  return {log_scale + std::log(std::abs(dm1)), std::arg(dm1)};
}

EigenpairSet eigenvalues_at(const LatticeModel& model, double energy,
                            const EigenOptions& opt) {
  if (!(energy > 0.0 && energy < model.band_top()))
    throw Error("spectrum is evaluated at real in-band energy");
  const int n = model.n_sites;
  const double t = model.t;

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = model.site_potential[i] + 2.0 * t;
    if (i + 1 < n) {
      h(i, i + 1) = -t;
      h(i + 1, i) = -t;
    }
  }
  h(n - 1, n - 1) = corner_term(model, energy);

  // Tridiagonal is already Hessenberg: skip the dense reduction.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur;
  schur.computeFromHessenberg(h, h, false);
  if (schur.info() != Eigen::Success) throw Error("Schur iteration failed");

  EigenpairSet set;
  set.evaluated_at = energy;
  set.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) set.eigenvalues[i] = schur.matrixT()(i, i);
  std::sort(set.eigenvalues.begin(), set.eigenvalues.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  if (!opt.with_vectors) return set;

  set.eigenvectors.resize(n, n);
  std::vector<bool> normalizable(n, true);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const TrackedEigenpair pair =
        nearest_eigenpair(model, energy, set.eigenvalues[j], nullptr);
    set.eigenvectors.col(static_cast<int>(j)) = pair.vector;
    if (pair.self_orthogonal) normalizable[j] = false;
  });

  // Biorthogonality is checked against nearby eigenvalues only; distant pairs
  // decouple to machine precision anyway.
  double defect = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!normalizable[i]) {
      set.defective = true;
      continue;
    }
    for (int j = i + 1; j < std::min(n, i + 6); ++j) {
      if (!normalizable[j]) continue;
      const Complex overlap =
          (set.eigenvectors.col(i).transpose() * set.eigenvectors.col(j))(0, 0);
      defect = std::max(defect, std::abs(overlap));
    }
  }
  set.biorthogonality_defect = defect;
  if (defect > opt.defect_tol) set.defective = true;
  return set;
}

TrackedEigenpair nearest_eigenpair(const LatticeModel& model, double energy,
                                   Complex shift, const Eigen::VectorXcd* warm_start) {
  const int n = model.n_sites;
  const double t = model.t;
  const Complex corner = corner_term(model, energy);
  const double h_scale = 4.0 * t + 2.0;

  Eigen::VectorXcd x = warm_start ? *warm_start : start_vector(n);
  x /= x.norm();

  std::vector<Complex> sub(n, Complex(-t)), sup(n, Complex(-t));
  Eigen::VectorXcd hx(n);
  Complex z = shift;
  bool have_estimate = false;

  for (int it = 0; it < 40; ++it) {
    // Tiny diagonal offset keeps the pivoted solve away from exact
    // singularity once the shift converges onto the eigenvalue.
    const Complex sigma = (have_estimate ? z : shift) + Complex(0.0, 1e-13 * h_scale);
    std::vector<Complex> diag(n);
    for (int i = 0; i < n; ++i)
      diag[i] = model.site_potential[i] + 2.0 * t - sigma;
    diag[n - 1] = corner - sigma;

    std::vector<Complex> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = x[i];
    const std::vector<Complex> y = solve_tridiagonal(sub, diag, sup, std::move(rhs));
    for (int i = 0; i < n; ++i) x[i] = y[i];
    x /= x.norm();

    apply_heff(model, corner, x, hx);
    const Complex xtx = (x.transpose() * x)(0, 0);
    if (std::abs(xtx) > 1e-10) {
      z = (x.transpose() * hx)(0, 0) / xtx;
    } else {
      z = x.dot(hx);  // Hermitian quotient fallback near self-orthogonality
    }
    have_estimate = true;

    const double resid = (hx - z * x).norm();
    if (resid < 1e-12 * h_scale) break;
  }

  TrackedEigenpair out;
  out.eigenvalue = z;
  out.vector = x;
  out.self_orthogonal = !bilinear_normalize(out.vector);
  return out;
}

}  // namespace rescat
