#pragma once

#include "phdae/types.hpp"

namespace phdae {

// Shifted Legendre polynomials P_k on [0, 1], normalized so that
// integral_0^1 P_k(x)^2 dx = 1.  P_0 = 1, P_1(x) = sqrt(3) (2x - 1), and
// the family satisfies the three-term recurrence encoded by the symmetric
// Jacobi matrix with diagonal 1/2 and off-diagonal entries
// xi_k = 1 / (2 sqrt(4 k^2 - 1)).

/// xi_k for k >= 1.
double legendre_xi(int k);

/// P_k(x) by the three-term recurrence (stable for all k used here).
double shifted_legendre(int k, double x);

/// d/dx P_k(x).
double shifted_legendre_derivative(int k, double x);

/// P_k(x) evaluated from the explicit binomial expansion of the Rodrigues
/// formula.  Exact-coefficient cross-check route; accurate for small k only.
double shifted_legendre_binomial(int k, double x);

/// Roots of P_s (the Gauss nodes on [0,1]) and the matching quadrature
/// weights.  Eigenvalue decomposition of the Jacobi matrix followed by one
/// Newton polish per root.  1 <= s <= 12.
void shifted_legendre_roots(int s, VecX& roots, VecX& weights);

/// Roots only.
VecX shifted_legendre_roots(int s);

} // namespace phdae
