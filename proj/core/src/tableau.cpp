#include "phdae/tableau.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "phdae/errors.hpp"
#include "phdae/legendre.hpp"

namespace phdae {

namespace {

// Value of the j-th Lagrange basis polynomial for the node set at x.
double lagrange_basis(const VecX& nodes, int j, double x) {
    double v = 1.0;
    for (int m = 0; m < nodes.size(); ++m) {
        if (m == j) continue;
        v *= (x - nodes[m]) / (nodes[j] - nodes[m]);
    }
    return v;
}

void finish_tableau(ButcherTableau& t) {
    Eigen::PartialPivLU<MatX> lu(t.A);
    const double det = std::abs(lu.determinant());
    if (!(det > 0.0) || !std::isfinite(det))
        throw Error("collocation tableau has a singular A matrix");
    t.A_inv = lu.inverse();
    // w = b^T A^{-1}, via a solve with A^T for accuracy
    t.w = t.A.transpose().partialPivLu().solve(t.b);
    t.rho = 1.0 - t.w.sum();
}

} // namespace

ButcherTableau collocation_tableau(const VecX& nodes) {
    const int s = int(nodes.size());
    if (s < 1) throw InputError("collocation_tableau: needs at least one node");
    for (int i = 0; i < s; ++i) {
        if (!(nodes[i] > 0.0) || !(nodes[i] <= 1.0))
            throw InputError("collocation_tableau: nodes must lie in (0, 1]");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            throw InputError("collocation_tableau: nodes must be strictly increasing");
    }

    // Quadrature nodes/weights for exact integration of the degree-(s-1)
    // Lagrange basis: the s-point Gauss rule is exact through degree 2s-1.
    VecX qn, qw;
    shifted_legendre_roots(s, qn, qw);

    ButcherTableau t;
    t.s = s;
    t.c = nodes;
    t.A.resize(s, s);
    t.b.resize(s);
    for (int j = 0; j < s; ++j) {
        // b_j = integral_0^1 l_j
        double bj = 0.0;
        for (int m = 0; m < s; ++m) bj += qw[m] * lagrange_basis(nodes, j, qn[m]);
        t.b[j] = bj;
        // a_ij = integral_0^{c_i} l_j, mapped rule on [0, c_i]
        for (int i = 0; i < s; ++i) {
            double aij = 0.0;
            for (int m = 0; m < s; ++m)
                aij += qw[m] * lagrange_basis(nodes, j, nodes[i] * qn[m]);
            t.A(i, j) = nodes[i] * aij;
        }
    }
    t.order = s;
    finish_tableau(t);
    return t;
}

ButcherTableau gauss_tableau(int s) {
    if (s < 1 || s > 12)
        throw InputError("gauss_tableau: s must be in [1, 12]");
    VecX nodes, weights;
    shifted_legendre_roots(s, nodes, weights);
    ButcherTableau t = collocation_tableau(nodes);
    // The quadrature weights from the Jacobi-matrix route are more accurate
    // than the integrated Lagrange form; they are the same numbers in exact
    // arithmetic.
    t.b = weights;
    t.order = 2 * s;
    finish_tableau(t);
    return t;
}

std::string ButcherTableau::format() const {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "stages " << s << "  order " << order << "  rho " << num(rho) << "\n";
    for (int i = 0; i < s; ++i) {
        os << num(c[i]) << " |";
        for (int j = 0; j < s; ++j) os << " " << num(A(i, j));
        os << "\n";
    }
    os << "--\nb |";
    for (int j = 0; j < s; ++j) os << " " << num(b[j]);
    os << "\n";
    return os.str();
}

} // namespace phdae
