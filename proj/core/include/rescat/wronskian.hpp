#pragma once

#include <complex>
#include <utility>

#include "rescat/chain_spec.hpp"

namespace rescat {

/// Potential of the transformed Hamiltonian, V(r) = -2 (ln W)'' with W the
/// Wronskian of the chain's transformation functions, evaluated through
/// numeric determinants.  This is the reference route the closed forms are
/// checked against.  Throws SingularWronskian when the determinant collapses
/// relative to the row norms (invalid parameter set or a node).
double generic_wronskian_potential(const DarbouxChainSpec& spec, double r);

/// Regular solution of the transformed equation at momentum k:
/// psi = W(u_1..u_m, sin(kr)) / W(u_1..u_m).  The seed sin(kr) is the regular
/// free solution, so for an empty chain this is sin(kr) itself.
Complex analytic_wavefunction(const DarbouxChainSpec& spec, Complex k, double r);

/// Same, together with d(psi)/dr (numerator/denominator derivatives are built
/// by row replacement, not by numeric differentiation).
std::pair<Complex, Complex> analytic_wavefunction_with_derivative(
    const DarbouxChainSpec& spec, Complex k, double r);

}  // namespace rescat
