#pragma once

#include <string>

#include "phdae/types.hpp"

namespace phdae {

/// Butcher tableau of an s-stage collocation method.
struct ButcherTableau {
    int s = 0;
    VecX c;       ///< nodes, strictly increasing in (0, 1)
    MatX A;
    VecX b;
    MatX A_inv;
    VecX w;       ///< b^T A^{-1}, the algebraic-update weights
    double rho = 0.0; ///< stability limit R(inf) = 1 - b^T A^{-1} e
    int order = 0;

    /// Plain-text rendering with 17 significant digits per entry.
    std::string format() const;
};

/// Collocation tableau on arbitrary distinct nodes in (0, 1].  A and b are
/// integrals of the Lagrange basis, evaluated with a Gauss quadrature that
/// is exact for the polynomial integrands.  `order` is set to the minimum
/// collocation guarantee s.
ButcherTableau collocation_tableau(const VecX& nodes);

/// s-stage Gauss tableau (nodes = roots of the shifted Legendre polynomial);
/// order 2s.  1 <= s <= 12.
ButcherTableau gauss_tableau(int s);

} // namespace phdae
