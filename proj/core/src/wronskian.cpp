#include "rescat/wronskian.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace rescat {
namespace {

// The chain Wronskians cancel by 10+ digits when the regularizer rates are
// small and close together (the sinh columns are then nearly linearly
// dependent), while the potential and wavefunction extracted from their
// ratios must stay good to ~1e-10.  All determinant work therefore runs in
// binary128.

struct QComplex {
  __float128 re, im;
};

inline QComplex operator+(QComplex a, QComplex b) { return {a.re + b.re, a.im + b.im}; }
inline QComplex operator-(QComplex a, QComplex b) { return {a.re - b.re, a.im - b.im}; }
inline QComplex operator-(QComplex a) { return {-a.re, -a.im}; }
inline QComplex operator*(QComplex a, QComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex operator*(__float128 s, QComplex a) { return {s * a.re, s * a.im}; }

// Smith's algorithm; robust against component overflow.
inline QComplex operator/(QComplex a, QComplex b) {
  if (fabsq(b.re) >= fabsq(b.im)) {
    const __float128 t = b.im / b.re;
    const __float128 d = b.re + b.im * t;
    return {(a.re + a.im * t) / d, (a.im - a.re * t) / d};
  }
  const __float128 t = b.re / b.im;
  const __float128 d = b.re * t + b.im;
  return {(a.re * t + a.im) / d, (a.im * t - a.re) / d};
}

inline __float128 qabs(QComplex a) { return hypotq(a.re, a.im); }

inline QComplex qexp(QComplex a) {
  const __float128 m = expq(a.re);
  return {m * cosq(a.im), m * sinq(a.im)};
}
inline QComplex qsinh(QComplex a) {
  return {sinhq(a.re) * cosq(a.im), coshq(a.re) * sinq(a.im)};
}
inline QComplex qcosh(QComplex a) {
  return {coshq(a.re) * cosq(a.im), sinhq(a.re) * sinq(a.im)};
}
inline QComplex qsin(QComplex a) {
  return {sinq(a.re) * coshq(a.im), cosq(a.re) * sinhq(a.im)};
}
inline QComplex qcos(QComplex a) {
  return {cosq(a.re) * coshq(a.im), -sinq(a.re) * sinhq(a.im)};
}

inline Complex to_complex(QComplex a) {
  return {static_cast<double>(a.re), static_cast<double>(a.im)};
}

// Square-matrix determinant by Gaussian elimination with partial pivoting.
QComplex det_inplace(std::vector<QComplex>& a, int n) {
  QComplex det{1.0Q, 0.0Q};
  for (int c = 0; c < n; ++c) {
    int piv = c;
    __float128 best = a[c * n + c].re * a[c * n + c].re + a[c * n + c].im * a[c * n + c].im;
    for (int r = c + 1; r < n; ++r) {
      const QComplex& x = a[r * n + c];
      const __float128 v = x.re * x.re + x.im * x.im;
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0Q) return {0.0Q, 0.0Q};
    if (piv != c) {
      for (int q = c; q < n; ++q) std::swap(a[c * n + q], a[piv * n + q]);
      det = -det;
    }
    const QComplex pivot = a[c * n + c];
    det = det * pivot;
    for (int r = c + 1; r < n; ++r) {
      const QComplex f = a[r * n + c] / pivot;
      a[r * n + c] = {0.0Q, 0.0Q};
      for (int q = c + 1; q < n; ++q) a[r * n + q] = a[r * n + q] - f * a[c * n + q];
    }
  }
  return det;
}

// One chain function together with its r-derivatives of any order.
// Columns of the Wronskian matrix; all derivatives are closed form.
struct ChainColumn {
  enum class Kind { exponential, sinh_rate, sine_seed };
  Kind kind;
  QComplex c;  // exponent (exponential), rate (sinh), or momentum (seed)

  QComplex derivative(int order, __float128 r) const {
    QComplex coef{1.0Q, 0.0Q};
    for (int p = 0; p < order; ++p) coef = coef * c;
    const QComplex arg = {c.re * r, c.im * r};
    switch (kind) {
      case Kind::exponential:
        return coef * qexp(arg);
      case Kind::sinh_rate:
        return coef * ((order % 2 == 0) ? qsinh(arg) : qcosh(arg));
      case Kind::sine_seed:
        switch (order % 4) {
          case 0: return coef * qsin(arg);
          case 1: return coef * qcos(arg);
          case 2: return -(coef * qsin(arg));
          default: return -(coef * qcos(arg));
        }
    }
    return {};
  }
};

std::vector<ChainColumn> chain_columns(const DarbouxChainSpec& spec) {
  std::vector<ChainColumn> cols;
  cols.reserve(spec.chain_order());
  for (const auto& res : spec.resonances) {
    // u = exp(-i alpha r) with alpha = -osc + i damp and its mirror.
    cols.push_back({ChainColumn::Kind::exponential,
                    {static_cast<__float128>(res.damping), static_cast<__float128>(res.oscillation)}});
    cols.push_back({ChainColumn::Kind::exponential,
                    {static_cast<__float128>(res.damping), static_cast<__float128>(-res.oscillation)}});
  }
  for (double b : spec.rates)
    cols.push_back({ChainColumn::Kind::sinh_rate, {static_cast<__float128>(b), 0.0Q}});
  return cols;
}

// Determinant of the matrix whose row p holds the derivative of order
// row_orders[p] of every column, with per-column magnitude scaling shared by
// the caller (scales cancel in every ratio formed below).
QComplex scaled_det(const std::vector<ChainColumn>& cols, const std::vector<int>& row_orders,
                    const std::vector<__float128>& col_scale, __float128 r) {
  const int m = static_cast<int>(cols.size());
  std::vector<QComplex> a(m * m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      QComplex v = cols[q].derivative(row_orders[p], r);
      a[p * m + q] = {v.re / col_scale[q], v.im / col_scale[q]};
    }
  return det_inplace(a, m);
}

std::vector<__float128> column_scales(const std::vector<ChainColumn>& cols, __float128 r,
                                      int max_order) {
  std::vector<__float128> scale(cols.size(), 1.0Q);
  for (std::size_t q = 0; q < cols.size(); ++q) {
    __float128 s = 0.0Q;
    for (int p = 0; p <= max_order; ++p) s = std::max(s, qabs(cols[q].derivative(p, r)));
    scale[q] = s > 0.0Q ? s : 1.0Q;
  }
  return scale;
}

// |W| relative to the product of row norms of the column-scaled matrix.  At
// quad precision anything above ~1e-30 is a genuine nonzero value; below it
// the Wronskian has a node (invalid parameter set).
double wronskian_floor(const std::vector<ChainColumn>& cols,
                       const std::vector<__float128>& col_scale, __float128 r,
                       QComplex w) {
  const int m = static_cast<int>(cols.size());
  __float128 bound = 1.0Q;
  for (int p = 0; p < m; ++p) {
    __float128 rn = 0.0Q;
    for (int q = 0; q < m; ++q) {
      const QComplex v = cols[q].derivative(p, r);
      const __float128 s = qabs(v) / col_scale[q];
      rn += s * s;
    }
    bound *= sqrtq(rn);
  }
  return bound > 0.0Q ? static_cast<double>(qabs(w) / bound) : 0.0;
}

// Derivative of a Wronskian-type determinant: bump each row's order in turn;
// terms with duplicated orders vanish.
std::vector<std::vector<int>> differentiate_orders(const std::vector<int>& orders) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    std::vector<int> bumped = orders;
    bumped[i] += 1;
    bool dup = false;
    for (std::size_t j = 0; j < bumped.size(); ++j)
      if (j != i && bumped[j] == bumped[i]) dup = true;
    if (!dup) out.push_back(std::move(bumped));
  }
  return out;
}

constexpr double kSingularTol = 1e-30;

}  // namespace

double generic_wronskian_potential(const DarbouxChainSpec& spec, double r) {
  spec.validate();
  if (spec.empty()) return 0.0;
  const auto cols = chain_columns(spec);
  const int m = static_cast<int>(cols.size());
  const __float128 rl = r;

  std::vector<int> w_orders(m);
  for (int p = 0; p < m; ++p) w_orders[p] = p;
  const auto scale = column_scales(cols, rl, m + 1);

  const QComplex w = scaled_det(cols, w_orders, scale, rl);
  if (wronskian_floor(cols, scale, rl, w) < kSingularTol)
    throw SingularWronskian("chain Wronskian vanishes at r = " + std::to_string(r));

  QComplex w1{0.0Q, 0.0Q};
  const auto first = differentiate_orders(w_orders);
  for (const auto& o : first) w1 = w1 + scaled_det(cols, o, scale, rl);

  QComplex w2{0.0Q, 0.0Q};
  for (const auto& o : first)
    for (const auto& o2 : differentiate_orders(o)) w2 = w2 + scaled_det(cols, o2, scale, rl);

  // (ln W)'' = W''/W - (W'/W)^2; W is real up to a constant complex factor,
  // so the ratio is real up to rounding.
  const QComplex lw1 = w1 / w;
  const QComplex ratio = w2 / w - lw1 * lw1;
  return static_cast<double>(-2.0Q * ratio.re);
}

std::pair<Complex, Complex> analytic_wavefunction_with_derivative(
    const DarbouxChainSpec& spec, Complex k, double r) {
  spec.validate();
  if (spec.empty()) {
    const Complex kr = k * r;
    return {std::sin(kr), k * std::cos(kr)};
  }

  for (const Complex& alpha : spec.alphas())
    if (std::abs(k - alpha) < 1e-12)
      throw SingularWronskian("wavefunction undefined at a factorization momentum");

  auto cols = chain_columns(spec);
  const int m = static_cast<int>(cols.size());
  const __float128 rl = r;

  std::vector<int> den_orders(m);
  for (int p = 0; p < m; ++p) den_orders[p] = p;
  std::vector<int> num_orders(m + 1);
  for (int p = 0; p <= m; ++p) num_orders[p] = p;

  auto num_cols = cols;
  num_cols.push_back({ChainColumn::Kind::sine_seed,
                      {static_cast<__float128>(k.real()), static_cast<__float128>(k.imag())}});

  const auto den_scale = column_scales(cols, rl, m + 2);
  auto num_scale = column_scales(num_cols, rl, m + 2);
  const __float128 seed_scale = num_scale.back();

  const QComplex den = scaled_det(cols, den_orders, den_scale, rl);
  if (wronskian_floor(cols, den_scale, rl, den) < kSingularTol)
    throw SingularWronskian("chain Wronskian vanishes at r = " + std::to_string(r));
  QComplex den1{0.0Q, 0.0Q};
  for (const auto& o : differentiate_orders(den_orders))
    den1 = den1 + scaled_det(cols, o, den_scale, rl);

  const QComplex num = scaled_det(num_cols, num_orders, num_scale, rl);
  QComplex num1{0.0Q, 0.0Q};
  for (const auto& o : differentiate_orders(num_orders))
    num1 = num1 + scaled_det(num_cols, o, num_scale, rl);

  // Column scales are constants at fixed r, so they cancel exactly except for
  // the seed column's own factor.
  const QComplex psi = seed_scale * (num / den);
  const QComplex dpsi = seed_scale * ((num1 * den - num * den1) / (den * den));
  return {to_complex(psi), to_complex(dpsi)};
}

Complex analytic_wavefunction(const DarbouxChainSpec& spec, Complex k, double r) {
  return analytic_wavefunction_with_derivative(spec, k, r).first;
}

}  // namespace rescat
