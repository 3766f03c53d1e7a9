#include "rescat/chain_spec.hpp"

#include <cmath>
#include <sstream>

namespace rescat {

DarbouxChainSpec DarbouxChainSpec::one_resonance(double a1, double a2, double b1,
                                                 double b2) {
  DarbouxChainSpec spec;
  spec.resonances.push_back({a1, a2});
  spec.rates = {b1, b2};
  spec.validate();
  return spec;
}

DarbouxChainSpec DarbouxChainSpec::two_resonance(double a1, double a2, double a3,
                                                 double a4, double b1, double b2,
                                                 double b3, double b4) {
  DarbouxChainSpec spec;
  spec.resonances.push_back({a1, a2});
  spec.resonances.push_back({a3, a4});
  spec.rates = {b1, b2, b3, b4};
  spec.validate();
  return spec;
}

std::vector<Complex> DarbouxChainSpec::alphas() const {
  std::vector<Complex> out;
  out.reserve(2 * resonances.size());
  for (const auto& res : resonances) {
    out.push_back(res.momentum());
    out.push_back(res.mirror_momentum());
  }
  return out;
}

void DarbouxChainSpec::validate() const {
  for (std::size_t p = 0; p < resonances.size(); ++p) {
    const auto& res = resonances[p];
    // Stability sector: both parameters negative with the oscillation
    // frequency dominating the damping rate.
    if (!(res.oscillation < res.damping && res.damping < 0.0)) {
      std::ostringstream msg;
      msg << "resonance pair " << (p + 1) << ": requires a_even < a_odd < 0, got a_odd="
          << res.damping << " a_even=" << res.oscillation;
      throw ParameterOrdering(msg.str());
    }
  }
  if (rates.size() != 2 * resonances.size()) {
    std::ostringstream msg;
    msg << "expected " << 2 * resonances.size() << " regularizer rates, got "
        << rates.size();
    throw ParameterOrdering(msg.str());
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0)) {
      std::ostringstream msg;
      msg << "regularizer rate b" << (i + 1) << " must be positive, got " << rates[i];
      throw ParameterOrdering(msg.str());
    }
    for (std::size_t j = i + 1; j < rates.size(); ++j) {
      if (std::abs(rates[i] - rates[j]) < kDegenerateRateTol) {
        std::ostringstream msg;
        msg << "regularizer rates b" << (i + 1) << " and b" << (j + 1)
            << " coincide (" << rates[i] << "); the Wronskian degenerates";
        throw DegenerateRates(msg.str());
      }
    }
  }
}

}  // namespace rescat
