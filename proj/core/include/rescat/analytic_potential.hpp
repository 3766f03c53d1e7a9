#pragma once

#include <vector>

#include "rescat/chain_spec.hpp"

namespace rescat {

enum class PotentialKind { free_particle, one_resonance, two_resonance, generic_wronskian };

/// Exactly solvable short-range potential built from a Darboux chain on the
/// zero potential.  Real, finite on (0, inf), exponentially decaying.  The
/// one- and two-resonance kinds evaluate closed forms; the generic kind goes
/// through the Wronskian determinants.
class AnalyticPotential {
public:
  static AnalyticPotential free_particle();
  static AnalyticPotential one_resonance(double a1, double a2, double b1, double b2);
  static AnalyticPotential two_resonance(double a1, double a2, double a3, double a4,
                                         double b1, double b2, double b3, double b4);
  static AnalyticPotential generic(DarbouxChainSpec spec);

  double operator()(double r) const;

  PotentialKind kind() const { return kind_; }
  const DarbouxChainSpec& spec() const { return spec_; }

  /// Argument shifts of the transformed sinh family: zeta_i for one
  /// resonance, eta_i = zeta_i + zeta~_i for two.
  std::vector<double> shift_constants() const {
    return {shifts_.begin(), shifts_.end()};
  }

  std::size_t resonance_count() const { return spec_.resonances.size(); }
  Complex resonance_momentum(std::size_t i) const { return spec_.resonances.at(i).momentum(); }
  Complex resonance_energy(std::size_t i) const { return spec_.resonances.at(i).energy(); }

private:
  AnalyticPotential(PotentialKind kind, DarbouxChainSpec spec,
                    std::vector<long double> shifts)
      : kind_(kind), spec_(std::move(spec)), shifts_(std::move(shifts)) {}

  PotentialKind kind_;
  DarbouxChainSpec spec_;
  // Extended precision: the shifted-sinh Wronskians cancel heavily for small,
  // nearly equal rates, and the shifts feed directly into that cancellation.
  std::vector<long double> shifts_;
};

/// tanh(zeta) = 2 a_damp b / (b^2 + a_damp^2 + a_osc^2); the argument shift a
/// single second-order transformation imprints on sinh(b r).
double sinh_argument_shift(double b, double a_damp, double a_osc);

namespace detail {

/// Closed-form 4th-order Wronskian W(sinh(b_i r - eta_i)) and its first two
/// r-derivatives, all scaled by exp(-log_scale) with log_scale = sum |xi_i|.
/// Extended precision throughout; the six-term sum cancels by many digits for
/// closely spaced rates.
struct ScaledWronskian {
  long double w, w1, w2;
  long double log_scale;
};

ScaledWronskian shifted_sinh_wronskian(const std::vector<double>& rates,
                                       const std::vector<long double>& shifts,
                                       long double r);

}  // namespace detail

}  // namespace rescat
