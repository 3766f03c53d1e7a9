#pragma once

#include "rescat/chain_spec.hpp"

namespace rescat {

struct JostValue {
  Complex value;
  Complex k;
};

/// Jost function of the transformed Hamiltonian,
/// F(k) = prod_j (k - alpha_j) / (k + i b_j), F = 1 for the empty chain.
/// Zeros sit exactly at the factorization momenta alpha_j, poles at -i b_j.
/// Throws PoleOfJost when k hits a pole.
JostValue jost_function(const DarbouxChainSpec& spec, Complex k);

/// Scattering phase shift delta(k) for k >= 0, continuous with delta(0) = 0.
/// Each resonance pair contributes a branch-continuous two-argument arctan;
/// each regularizer rate contributes -arctan(k/b).
double exact_phase_shift(const DarbouxChainSpec& spec, double k);

}  // namespace rescat
