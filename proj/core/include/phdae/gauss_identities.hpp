#pragma once

#include <string>
#include <vector>

#include "phdae/tableau.hpp"
#include "phdae/types.hpp"

namespace phdae {

// Classical algebraic identities of the Gauss collocation family, checked
// numerically.  With G_ij = P_{j-1}(c_i) (normalized shifted Legendre
// polynomials at the nodes) and B = diag(b):
//   * G^T B G = I                 (quadrature exactness / orthonormality),
//   * G^{-1} A G = X_G,           X_G tridiagonal with first row
//                                 (1/2, -xi_1, 0, ...), subdiagonal xi_k,
//                                 superdiagonal -xi_k, zero diagonal below
//                                 the first entry,
//   * det A = s! / (2s)!,
//   * b^T A^{-1} e_s = 0 (s even) / 2 (s odd),
//   * rho = R(inf) = 1 - b^T A^{-1} e = (-1)^s.

/// Vandermonde-like matrix G of normalized shifted Legendre values at the
/// Gauss nodes.  1 <= s <= 10.
MatX matrix_G(int s);

/// The tridiagonal similarity image X_G of A.  1 <= s <= 10.
MatX matrix_XG(int s);

/// Numerical check report for one stage count.
struct IdentityReport {
    int s = 0;
    double gbg_error = 0.0;        ///< || G^T B G - I ||_max
    double similarity_error = 0.0; ///< || G^{-1} A G - X_G ||_max
    double det_A = 0.0;
    double det_closed_form = 0.0;  ///< s! / (2s)! by exact integer arithmetic
    double rho_numeric = 0.0;
    double rho_closed_form = 0.0;  ///< (-1)^s
    double bAinv_e = 0.0;          ///< b^T A^{-1} e_s
    bool passed = false;
};

struct IdentityTolerances {
    double det_rel = 1e-10;
    double rho_abs = 1e-10;
    double bAinv_abs = 1e-10;
    double gbg_abs = 1e-11;
    double similarity_abs = 1e-11;
};

/// Runs all checks for stage counts 1..max_stages (1 <= max_stages <= 8).
std::vector<IdentityReport> verify_gauss_identities(int max_stages,
                                                    const IdentityTolerances& tol = {});

/// Plain-text report; one row per stage count.
std::string format_identity_reports(const std::vector<IdentityReport>& reports);

/// Closed-form determinant s! / (2s)! via exact integer factorials (s <= 8).
double gauss_det_closed_form(int s);

} // namespace phdae
