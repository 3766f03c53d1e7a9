#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rescat/errors.hpp"

namespace rescat {

using Complex = std::complex<double>;

/// Parameters of one resonance carried by a pair of irregular transformation
/// functions exp((damping ± i oscillation) r).  The associated factorization
/// momenta are -oscillation + i damping and its mirror +oscillation + i damping.
struct ResonanceParams {
  double damping = 0.0;      // envelope decay rate, < 0
  double oscillation = 0.0;  // phase frequency, < 0 and |oscillation| > |damping|

  Complex momentum() const { return {-oscillation, damping}; }
  Complex mirror_momentum() const { return {oscillation, damping}; }
  Complex energy() const { auto k = momentum(); return k * k; }
};

/// Parameter set of a Darboux transformation chain acting on the zero
/// potential: per-resonance momentum pairs plus the regularizer rates b_j of
/// the sinh(b_j r) family, two rates per resonance.
struct DarbouxChainSpec {
  std::vector<ResonanceParams> resonances;
  std::vector<double> rates;

  static DarbouxChainSpec free_particle() { return {}; }
  static DarbouxChainSpec one_resonance(double a1, double a2, double b1, double b2);
  static DarbouxChainSpec two_resonance(double a1, double a2, double a3, double a4,
                                        double b1, double b2, double b3, double b4);

  std::size_t chain_order() const { return 2 * resonances.size() + rates.size(); }
  bool empty() const { return resonances.empty() && rates.empty(); }

  /// Factorization momenta of the irregular family, two per resonance.
  std::vector<Complex> alphas() const;

  /// Throws ParameterOrdering / DegenerateRates when the stability sector is
  /// violated (per pair: oscillation < damping < 0; rates positive, pairwise
  /// distinct, exactly two per resonance).
  void validate() const;
};

/// Rates closer than this are treated as degenerate (the sinh Wronskian rows
/// become linearly dependent).
inline constexpr double kDegenerateRateTol = 1e-10;

}  // namespace rescat
