#include "phdae/gauss_identities.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include <Eigen/LU>

#include "phdae/errors.hpp"
#include "phdae/legendre.hpp"

namespace phdae {

MatX matrix_G(int s) {
    if (s < 1 || s > 10) throw InputError("matrix_G: stage count must be in [1, 10]");
    const VecX nodes = shifted_legendre_roots(s);
    MatX G(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            G(i, j) = shifted_legendre(j, nodes[i]);
    return G;
}

MatX matrix_XG(int s) {
    if (s < 1 || s > 10) throw InputError("matrix_XG: stage count must be in [1, 10]");
    MatX X = MatX::Zero(s, s);
    X(0, 0) = 0.5;
    for (int k = 1; k < s; ++k) {
        const double xi = legendre_xi(k);
        X(k - 1, k) = -xi;
        X(k, k - 1) = xi;
    }
    return X;
}

double gauss_det_closed_form(int s) {
    if (s < 1 || s > 8) throw InputError("gauss_det_closed_form: stage count must be in [1, 8]");
    // s! / (2s)! = 1 / ((s+1)(s+2)...(2s)); exact in 64-bit for s <= 8
    std::uint64_t denom = 1;
    for (int k = s + 1; k <= 2 * s; ++k) denom *= std::uint64_t(k);
    return 1.0 / double(denom);
}

std::vector<IdentityReport> verify_gauss_identities(int max_stages,
                                                    const IdentityTolerances& tol) {
    if (max_stages < 1 || max_stages > 8)
        throw InputError("verify_gauss_identities: max_stages must be in [1, 8]");
    std::vector<IdentityReport> reports;
    reports.reserve(size_t(max_stages));
    for (int s = 1; s <= max_stages; ++s) {
        const ButcherTableau t = gauss_tableau(s);
        const MatX G = matrix_G(s);
        const MatX XG = matrix_XG(s);

        IdentityReport r;
        r.s = s;
        r.gbg_error = (G.transpose() * t.b.asDiagonal() * G - MatX::Identity(s, s))
                          .cwiseAbs()
                          .maxCoeff();
        const MatX sim = G.partialPivLu().solve(t.A * G);
        r.similarity_error = (sim - XG).cwiseAbs().maxCoeff();
        r.det_A = t.A.partialPivLu().determinant();
        r.det_closed_form = gauss_det_closed_form(s);
        r.rho_numeric = t.rho;
        r.rho_closed_form = (s % 2 == 0) ? 1.0 : -1.0;
        // e_s is the ones vector, so this is the term entering R(infinity)
        r.bAinv_e = (t.b.transpose() * t.A.partialPivLu().solve(VecX(VecX::Ones(s))))(0);

        const double bAinv_closed = (s % 2 == 0) ? 0.0 : 2.0;
        r.passed = std::abs(r.det_A - r.det_closed_form) <=
                       tol.det_rel * std::abs(r.det_closed_form) &&
                   std::abs(r.rho_numeric - r.rho_closed_form) <= tol.rho_abs &&
                   std::abs(r.bAinv_e - bAinv_closed) <= tol.bAinv_abs &&
                   r.gbg_error <= tol.gbg_abs && r.similarity_error <= tol.similarity_abs;
        reports.push_back(r);
    }
    return reports;
}

std::string format_identity_reports(const std::vector<IdentityReport>& reports) {
    std::ostringstream os;
    os << "  s   |det A - s!/(2s)!|   |rho - (-1)^s|   b^T A^-1 e_s   "
          "|G^T B G - I|   |G^-1 A G - X_G|   result\n";
    char line[256];
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line,
                      "%3d   %18.3e   %14.3e   %12.9f   %13.3e   %16.3e   %s\n", r.s,
                      std::abs(r.det_A - r.det_closed_form),
                      std::abs(r.rho_numeric - r.rho_closed_form), r.bAinv_e, r.gbg_error,
                      r.similarity_error, r.passed ? "ok" : "FAIL");
        os << line;
    }
    return os.str();
}

} // namespace phdae
