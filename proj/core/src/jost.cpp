#include "rescat/jost.hpp"

#include <cmath>
#include <string>

namespace rescat {

JostValue jost_function(const DarbouxChainSpec& spec, Complex k) {
  spec.validate();
  Complex f(1.0, 0.0);
  for (double b : spec.rates) {
    const Complex pole(0.0, -b);
    if (std::abs(k - pole) < 1e-12)
      throw PoleOfJost("Jost function has a pole at k = -i" + std::to_string(b));
    f /= k + Complex(0.0, b);
  }
  for (const Complex& alpha : spec.alphas()) f *= k - alpha;
  return {f, k};
}

double exact_phase_shift(const DarbouxChainSpec& spec, double k) {
  spec.validate();
  if (k == 0.0) return 0.0;
  double delta = 0.0;
  for (const auto& res : spec.resonances) {
    // Combined contribution of the mirror pair alpha, -conj(alpha).  The
    // two-argument form stays continuous through k^2 = |alpha|^2, where the
    // single-argument arctan of the paper jumps by pi.
    const double a1 = res.damping, a2 = res.oscillation;
    delta -= std::atan2(2.0 * a1 * k, a1 * a1 + a2 * a2 - k * k);
  }
  for (double b : spec.rates) delta -= std::atan(k / b);
  return delta;
}

}  // namespace rescat
