#include "rescat/radial_integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rescat/errors.hpp"
#include "rescat/numeric_util.hpp"

namespace rescat {
namespace {

using State = std::array<Complex, 2>;  // psi, psi'

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-minus-4th order error weights (k7 = FSAL stage).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename Potential>
WaveAtMatch integrate_impl(const Potential& pot, double r_end, Complex k,
                           const IntegratorOptions& opt) {
  const Complex k2 = k * k;
  auto rhs = [&](double r, const State& y) -> State {
    return {y[1], (pot(r) - k2) * y[0]};
  };

  double r = opt.origin_eps;
  if (r_end <= r)
    throw IntegratorFailure("matching radius below the origin regularization");
  State y = {Complex(r, 0.0), Complex(1.0, 0.0)};  // psi ~ r near the origin

  double h = std::min(1e-3, (r_end - r) / 16.0);
  State k1 = rhs(r, y);
  std::size_t steps = 0;

  while (r < r_end) {
    if (++steps > opt.max_steps)
      throw IntegratorFailure("step budget exhausted at r = " + std::to_string(r));
    h = std::min(h, r_end - r);

    State y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < 2; ++i) y2[i] = y[i] + h * (a21 * k1[i]);
    const State k2s = rhs(r + c2 * h, y2);
    for (int i = 0; i < 2; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2s[i]);
    const State k3 = rhs(r + c3 * h, y3);
    for (int i = 0; i < 2; ++i)
      y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2s[i] + a43 * k3[i]);
    const State k4 = rhs(r + c4 * h, y4);
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2s[i] + a53 * k3[i] + a54 * k4[i]);
    const State k5 = rhs(r + c5 * h, y5);
    for (int i = 0; i < 2; ++i)
      y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2s[i] + a63 * k3[i] + a64 * k4[i] +
                          a65 * k5[i]);
    const State k6 = rhs(r + h, y6);
    for (int i = 0; i < 2; ++i)
      y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const State k7 = rhs(r + h, y7);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const Complex de = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y7[i]));
      err = std::max(err, std::abs(de) / scale);
    }

    if (err <= 1.0) {
      r += h;
      y = y7;
      k1 = k7;  // FSAL
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-14 * std::max(1.0, r))
      throw IntegratorFailure("step size underflow at r = " + std::to_string(r));
  }
  return {y[0], y[1], r_end};
}

}  // namespace

WaveAtMatch integrate_radial(const TruncatedPotential& tp, Complex k,
                             const IntegratorOptions& opt) {
  return integrate_impl([&tp](double r) { return tp(r); }, tp.r_cut, k, opt);
}

WaveAtMatch integrate_radial(const PotentialTable& table, Complex k,
                             const IntegratorOptions& opt) {
  return integrate_impl([&table](double r) { return table(r); }, table.r_cut(), k, opt);
}

LogDerivative integrate_log_derivative(const TruncatedPotential& tp, Complex k,
                                       const IntegratorOptions& opt) {
  if (std::abs(k) == 0.0) throw IntegratorFailure("momentum must be nonzero");
  const WaveAtMatch w = integrate_radial(tp, k, opt);
  if (std::abs(w.psi) < 1e-11 * (std::abs(w.psi) + tp.r_cut * std::abs(w.dpsi)))
    throw NodeAtMatching("psi(r_cut) ~ 0; perturb k or use the node-free residual");
  return {w.dpsi / w.psi, k, tp.r_cut};
}

PotentialTable::PotentialTable(const TruncatedPotential& tp, double tol)
    : r_cut_(tp.r_cut) {
  constexpr int kDegree = 24;

  // Chebyshev fit on one panel; tail coefficients estimate the error.
  auto fit_panel = [&](double lo, double hi) {
    Panel panel{lo, hi, std::vector<double>(kDegree + 1, 0.0)};
    std::array<double, kDegree + 1> samples{};
    for (int j = 0; j <= kDegree; ++j) {
      const double x = std::cos(kPi * j / kDegree);  // extrema nodes
      samples[j] = tp.potential(lo + (hi - lo) * 0.5 * (x + 1.0));
    }
    for (int n = 0; n <= kDegree; ++n) {
      double s = 0.0;
      for (int j = 0; j <= kDegree; ++j) {
        const double w = (j == 0 || j == kDegree) ? 0.5 : 1.0;
        s += w * samples[j] * std::cos(kPi * n * j / kDegree);
      }
      panel.coef[n] = 2.0 * s / kDegree;
    }
    panel.coef[0] *= 0.5;
    return panel;
  };
  auto tail_norm = [](const Panel& p) {
    double t = 0.0;
    for (std::size_t n = p.coef.size() - 3; n < p.coef.size(); ++n)
      t = std::max(t, std::abs(p.coef[n]));
    return t;
  };

  std::vector<std::pair<double, double>> work;
  const int n0 = std::max(1, static_cast<int>(std::ceil(r_cut_)));
  for (int i = 0; i < n0; ++i)
    work.emplace_back(r_cut_ * i / n0, r_cut_ * (i + 1) / n0);
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    Panel p = fit_panel(lo, hi);
    if (tail_norm(p) <= tol || hi - lo < 1e-4) {
      panels_.push_back(std::move(p));
    } else {
      const double mid = 0.5 * (lo + hi);
      work.emplace_back(lo, mid);
      work.emplace_back(mid, hi);
    }
  }
  std::sort(panels_.begin(), panels_.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
}

double PotentialTable::operator()(double r) const {
  if (r >= r_cut_ || panels_.empty()) return 0.0;
  if (r < 0.0) r = 0.0;
  // Panels are sorted and contiguous; binary search for the owner.
  std::size_t lo = 0, hi = panels_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (r < panels_[mid].hi)
      hi = mid;
    else
      lo = mid + 1;
  }
  const Panel& p = panels_[lo];
  const double x = 2.0 * (r - p.lo) / (p.hi - p.lo) - 1.0;
  // Clenshaw recurrence.
  double u1 = 0.0, u2 = 0.0;
  for (std::size_t n = p.coef.size(); n-- > 1;) {
    const double u = 2.0 * x * u1 - u2 + p.coef[n];
    u2 = u1;
    u1 = u;
  }
  return x * u1 - u2 + p.coef[0];
}

}  // namespace rescat
