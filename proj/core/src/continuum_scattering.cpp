#include "rescat/continuum_scattering.hpp"

#include <algorithm>
#include <cmath>

#include "rescat/numeric_util.hpp"
#include "rescat/parallel.hpp"

namespace rescat {
namespace {

std::string to_string(Complex z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

// Node-free pole residual g(k) = psi'(R) - ik psi(R); same zeros as
// gamma - ik, no poles at nodes of psi.
template <typename Source>
Complex pole_residual(const Source& src, Complex k, const IntegratorOptions& opt) {
  const WaveAtMatch w = integrate_radial(src, k, opt);
  return w.dpsi - Complex(0, 1) * k * w.psi;
}

// Damped Newton on g with finite-difference derivative; g is analytic in k,
// so a real step suffices for the derivative.
template <typename Source>
Complex refine_pole(const Source& src, Complex k, const TranscendentalSearchOptions& opt) {
  Complex g = pole_residual(src, k, opt.integrator);
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    const double h = 1e-6 * std::max(1.0, std::abs(k));
    const Complex gp = pole_residual(src, k + h, opt.integrator);
    const Complex gm = pole_residual(src, k - h, opt.integrator);
    const Complex dg = (gp - gm) / (2.0 * h);
    if (std::abs(dg) == 0.0) throw NoConvergence("flat residual at k = " + to_string(k));
    Complex step = -g / dg;

    Complex k_next = k + step;
    Complex g_next = pole_residual(src, k_next, opt.integrator);
    int halvings = 0;
    while (std::abs(g_next) > std::abs(g) && halvings < 10) {
      step *= 0.5;
      k_next = k + step;
      g_next = pole_residual(src, k_next, opt.integrator);
      ++halvings;
    }
    k = k_next;
    g = g_next;

    // Converged when gamma - ik (= g / psi) is small and the iterate has
    // settled; the second condition keeps poles sharp to machine precision so
    // deduplication and grid-doubling checks are meaningful.
    const WaveAtMatch w = integrate_radial(src, k, opt.integrator);
    const bool residual_ok =
        std::abs(w.psi) > 0.0 && std::abs(g / w.psi) < opt.residual_tol;
    const bool settled = std::abs(step) < 1e-10 * std::max(1.0, std::abs(k));
    if (residual_ok && settled) return k;
  }
  throw NoConvergence("Newton stalled near k = " + to_string(k));
}

bool straddles_zero(double a, double b, double c, double d) {
  const double lo = std::min(std::min(a, b), std::min(c, d));
  const double hi = std::max(std::max(a, b), std::max(c, d));
  return lo <= 0.0 && hi >= 0.0;
}

}  // namespace

double cutoff_phase_shift(const TruncatedPotential& tp, double k) {
  const LogDerivative ld = integrate_log_derivative(tp, Complex(k, 0.0));
  const double gamma = ld.gamma.real();
  const double num = k * std::cos(k * tp.r_cut) - gamma * std::sin(k * tp.r_cut);
  const double den = k * std::sin(k * tp.r_cut) + gamma * std::cos(k * tp.r_cut);
  return wrap_to_period(std::atan2(num, den), kPi);
}

std::vector<double> cutoff_phase_shift_curve(const TruncatedPotential& tp,
                                             std::span<const double> k_grid) {
  std::vector<double> principal(k_grid.size());
  parallel_for(k_grid.size(),
               [&](std::size_t i) { principal[i] = cutoff_phase_shift(tp, k_grid[i]); });
  return unwrap_sequence(principal, kPi, 0.0);
}

Complex s_matrix_cut(const TruncatedPotential& tp, double k) {
  const LogDerivative ld = integrate_log_derivative(tp, Complex(k, 0.0));
  const Complex i(0.0, 1.0);
  return std::exp(-2.0 * i * k * tp.r_cut) * (k - i * ld.gamma) / (k + i * ld.gamma);
}

TranscendentalSearchResult find_transcendental_poles(
    const TruncatedPotential& tp, const Rectangle& region, const GridSize& grid,
    const TranscendentalSearchOptions& opt) {
  if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max))
    throw EmptyRegion("degenerate search rectangle");
  if (region.im_max > 1e-12)
    throw EmptyRegion("pole search expects the lower half energy plane");
  if (grid.n_re < 2 || grid.n_im < 2) throw EmptyRegion("grid must be at least 2x2");

  const PotentialTable table(tp);

  // Resonance-sheet momentum: principal sqrt maps Im E <= 0 onto
  // Re k >= 0, Im k <= 0 continuously from the positive real axis.
  auto k_of = [](Complex e) { return std::sqrt(e); };

  const int nr = grid.n_re, ni = grid.n_im;
  std::vector<Complex> g(static_cast<std::size_t>(nr) * ni);
  std::vector<double> g_scale(g.size(), 1.0);
  parallel_for(g.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) % nr;
    const int j = static_cast<int>(idx) / nr;
    const Complex e(region.re_min + (region.re_max - region.re_min) * i / (nr - 1),
                    region.im_min + (region.im_max - region.im_min) * j / (ni - 1));
    const Complex k = k_of(e);
    const WaveAtMatch w = integrate_radial(table, k, opt.integrator);
    const double scale = std::abs(w.dpsi) + std::abs(k) * std::abs(w.psi);
    g[idx] = (w.dpsi - Complex(0, 1) * k * w.psi) / (scale > 0 ? scale : 1.0);
  });

  std::vector<Complex> seeds;
  for (int j = 0; j + 1 < ni; ++j)
    for (int i = 0; i + 1 < nr; ++i) {
      const Complex c00 = g[j * nr + i], c10 = g[j * nr + i + 1];
      const Complex c01 = g[(j + 1) * nr + i], c11 = g[(j + 1) * nr + i + 1];
      if (straddles_zero(c00.real(), c10.real(), c01.real(), c11.real()) &&
          straddles_zero(c00.imag(), c10.imag(), c01.imag(), c11.imag())) {
        const double re = region.re_min + (region.re_max - region.re_min) * (i + 0.5) / (nr - 1);
        const double im = region.im_min + (region.im_max - region.im_min) * (j + 0.5) / (ni - 1);
        seeds.emplace_back(re, im);
      }
    }

  TranscendentalSearchResult result;
  result.seeds_tried = static_cast<int>(seeds.size());
  std::vector<std::optional<Complex>> refined(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    try {
      refined[s] = refine_pole(table, k_of(seeds[s]), opt);
    } catch (const NoConvergence&) {
      refined[s] = std::nullopt;
    }
  });

  const double cell = std::max((region.re_max - region.re_min) / (nr - 1),
                               (region.im_max - region.im_min) / (ni - 1));
  for (const auto& kr : refined) {
    if (!kr) {
      ++result.seeds_failed;
      continue;
    }
    const Complex e = (*kr) * (*kr);
    if (!region.contains(e, cell)) continue;
    bool dup = false;
    for (const auto& p : result.poles)
      if (std::abs(p.energy - e) < opt.dedup_tol * std::max(1.0, std::abs(e))) dup = true;
    if (dup) continue;

    const WaveAtMatch w = integrate_radial(table, *kr, opt.integrator);
    const double residual =
        std::abs(w.psi) > 0 ? std::abs((w.dpsi - Complex(0, 1) * (*kr) * w.psi) / w.psi)
                            : 0.0;
    result.poles.push_back({e, *kr, PoleMethod::transcendental, residual,
                            PoleClass::unclassified});
  }
  std::sort(result.poles.begin(), result.poles.end(),
            [](const PoleEstimate& a, const PoleEstimate& b) {
              return a.energy.real() < b.energy.real();
            });
  return result;
}

Complex refine_transcendental_pole_k(const TruncatedPotential& tp, Complex k_seed,
                                     const TranscendentalSearchOptions& opt) {
  return refine_pole(tp, k_seed, opt);
}

}  // namespace rescat
