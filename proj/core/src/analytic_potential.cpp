#include "rescat/analytic_potential.hpp"

#include <quadmath.h>

#include <array>
#include <cmath>

#include "rescat/wronskian.hpp"

namespace rescat {
namespace {

// Exponentially scaled hyperbolics: sh = sinh(x) e^{-|x|}, ch = cosh(x) e^{-|x|},
// u = e^{-2|x|}.  Keeps every closed form finite for arbitrarily large r; the
// common e^{|x|} factors cancel in the ratios below.
//
// The one-resonance form is numerically benign and runs in long double (it
// sits on the radial integrator's hot path).  The two-resonance six-term sum
// cancels by 8+ digits for small, closely spaced rates, so it runs in
// binary128.

struct ScaledHypL {
  long double sh, ch, u;
};

ScaledHypL scaled_hyp_l(long double x) {
  const long double u = std::exp(-2.0L * std::abs(x));
  const long double sign = x >= 0.0L ? 1.0L : -1.0L;
  return {sign * (1.0L - u) / 2.0L, (1.0L + u) / 2.0L, u};
}

double one_resonance_value(const DarbouxChainSpec& spec,
                           const std::vector<long double>& shifts, double r) {
  const long double b1 = spec.rates[0], b2 = spec.rates[1];
  const ScaledHypL h1 = scaled_hyp_l(b1 * static_cast<long double>(r) - shifts[0]);
  const ScaledHypL h2 = scaled_hyp_l(b2 * static_cast<long double>(r) - shifts[1]);
  // Numerator and denominator both carry e^{2(|xi1|+|xi2|)}; the residual
  // u-factors keep the difference of differently scaled sinh^2 terms exact.
  const long double num =
      b2 * b2 * h1.sh * h1.sh * h2.u - b1 * b1 * h2.sh * h2.sh * h1.u;
  const long double den = b2 * h1.sh * h2.ch - b1 * h2.sh * h1.ch;
  return static_cast<double>(2.0L * (b1 * b1 - b2 * b2) * num / (den * den));
}

struct ScaledHypQ {
  __float128 sh, ch;
};

ScaledHypQ scaled_hyp_q(__float128 x) {
  const __float128 u = expq(-2.0Q * fabsq(x));
  const __float128 sign = x >= 0.0Q ? 1.0Q : -1.0Q;
  return {sign * (1.0Q - u) / 2.0Q, (1.0Q + u) / 2.0Q};
}

// The 4th-order Wronskian of sinh(b_i r - eta_i) collapses to six products
// cosh xi_i cosh xi_j sinh xi_k sinh xi_l over the pair partitions of
// {1,2,3,4}.
struct WronskianTerm {
  std::array<int, 2> cosh_idx;
  std::array<int, 2> sinh_idx;
  __float128 coef;
};

std::array<WronskianTerm, 6> two_resonance_terms(const std::vector<double>& rates) {
  std::array<__float128, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = rates[i];
  // (i, j) cosh pair ascending; (k, l) the complementary sinh pair with k > l.
  constexpr std::array<std::array<int, 4>, 6> part = {{
      {0, 1, 3, 2}, {0, 2, 3, 1}, {0, 3, 2, 1}, {1, 2, 3, 0}, {1, 3, 2, 0}, {2, 3, 1, 0}}};
  std::array<WronskianTerm, 6> terms{};
  for (std::size_t m = 0; m < 6; ++m) {
    const int i = part[m][0], j = part[m][1], k = part[m][2], l = part[m][3];
    const __float128 sign = ((i + 1 + j + 1) % 2 == 0) ? 1.0Q : -1.0Q;
    terms[m] = {{i, j},
                {k, l},
                sign * b[i] * b[j] * (b[j] * b[j] - b[i] * b[i]) *
                    (b[k] * b[k] - b[l] * b[l])};
  }
  return terms;
}

struct WronskianSumQ {
  __float128 w, w1, w2;
  __float128 log_scale;
};

WronskianSumQ shifted_sinh_wronskian_q(const std::vector<double>& rates,
                                       const std::vector<long double>& shifts,
                                       __float128 r) {
  std::array<__float128, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = rates[i];
  std::array<ScaledHypQ, 4> h;
  __float128 log_scale = 0.0Q;
  for (int i = 0; i < 4; ++i) {
    const __float128 xi = b[i] * r - static_cast<__float128>(shifts[i]);
    h[i] = scaled_hyp_q(xi);
    log_scale += fabsq(xi);
  }

  // factor(i): scaled cosh or sinh depending on the term's assignment;
  // toggled(i): its derivative partner (d cosh xi = b sinh xi etc.).
  __float128 w = 0.0Q, w1 = 0.0Q, w2 = 0.0Q;
  for (const auto& term : two_resonance_terms(rates)) {
    std::array<__float128, 4> f, g;
    std::array<bool, 4> is_cosh{};
    for (int idx : term.cosh_idx) is_cosh[idx] = true;
    for (int i = 0; i < 4; ++i) {
      f[i] = is_cosh[i] ? h[i].ch : h[i].sh;
      g[i] = is_cosh[i] ? h[i].sh : h[i].ch;
    }
    const __float128 prod = f[0] * f[1] * f[2] * f[3];
    w += term.coef * prod;

    __float128 d1 = 0.0Q;
    for (int m = 0; m < 4; ++m) {
      __float128 p = b[m] * g[m];
      for (int n = 0; n < 4; ++n)
        if (n != m) p *= f[n];
      d1 += p;
    }
    w1 += term.coef * d1;

    // f'' = b^2 f for both sinh and cosh, so the diagonal part of the second
    // derivative reuses prod.
    __float128 d2 = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3]) * prod;
    for (int m = 0; m < 4; ++m)
      for (int n = m + 1; n < 4; ++n) {
        __float128 p = 2.0Q * b[m] * b[n] * g[m] * g[n];
        for (int q = 0; q < 4; ++q)
          if (q != m && q != n) p *= f[q];
        d2 += p;
      }
    w2 += term.coef * d2;
  }
  return {w, w1, w2, log_scale};
}

double two_resonance_value(const DarbouxChainSpec& spec,
                           const std::vector<long double>& shifts, double r) {
  const auto sw = shifted_sinh_wronskian_q(spec.rates, shifts, r);
  if (fabsq(sw.w) < 1e-4000Q)
    throw SingularWronskian("two-resonance Wronskian vanishes at r = " + std::to_string(r));
  const __float128 lw1 = sw.w1 / sw.w;
  return static_cast<double>(-2.0Q * (sw.w2 / sw.w - lw1 * lw1));
}

long double sinh_argument_shift_l(double b, double a_damp, double a_osc) {
  const long double bl = b, a1 = a_damp, a2 = a_osc;
  return std::atanh(2.0L * a1 * bl / (bl * bl + a1 * a1 + a2 * a2));
}

}  // namespace

double sinh_argument_shift(double b, double a_damp, double a_osc) {
  return static_cast<double>(sinh_argument_shift_l(b, a_damp, a_osc));
}

AnalyticPotential AnalyticPotential::free_particle() {
  return {PotentialKind::free_particle, DarbouxChainSpec::free_particle(), {}};
}

AnalyticPotential AnalyticPotential::one_resonance(double a1, double a2, double b1,
                                                   double b2) {
  auto spec = DarbouxChainSpec::one_resonance(a1, a2, b1, b2);
  std::vector<long double> shifts = {sinh_argument_shift_l(b1, a1, a2),
                                     sinh_argument_shift_l(b2, a1, a2)};
  return {PotentialKind::one_resonance, std::move(spec), std::move(shifts)};
}

AnalyticPotential AnalyticPotential::two_resonance(double a1, double a2, double a3,
                                                   double a4, double b1, double b2,
                                                   double b3, double b4) {
  auto spec = DarbouxChainSpec::two_resonance(a1, a2, a3, a4, b1, b2, b3, b4);
  std::vector<long double> shifts(4);
  const std::array<double, 4> b = {b1, b2, b3, b4};
  for (int i = 0; i < 4; ++i)
    shifts[i] = sinh_argument_shift_l(b[i], a1, a2) + sinh_argument_shift_l(b[i], a3, a4);
  return {PotentialKind::two_resonance, std::move(spec), std::move(shifts)};
}

AnalyticPotential AnalyticPotential::generic(DarbouxChainSpec spec) {
  spec.validate();
  return {PotentialKind::generic_wronskian, std::move(spec), {}};
}

double AnalyticPotential::operator()(double r) const {
  switch (kind_) {
    case PotentialKind::free_particle:
      return 0.0;
    case PotentialKind::one_resonance:
      return one_resonance_value(spec_, shifts_, r);
    case PotentialKind::two_resonance:
      return two_resonance_value(spec_, shifts_, r);
    case PotentialKind::generic_wronskian:
      return generic_wronskian_potential(spec_, r);
  }
  return 0.0;
}

namespace detail {

ScaledWronskian shifted_sinh_wronskian(const std::vector<double>& rates,
                                       const std::vector<long double>& shifts,
                                       long double r) {
  const auto sw = shifted_sinh_wronskian_q(rates, shifts, static_cast<__float128>(r));
  return {static_cast<long double>(sw.w), static_cast<long double>(sw.w1),
          static_cast<long double>(sw.w2), static_cast<long double>(sw.log_scale)};
}

}  // namespace detail

}  // namespace rescat
