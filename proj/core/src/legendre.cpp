#include "phdae/legendre.hpp"

#include <cmath>

#include "phdae/errors.hpp"

namespace phdae {

double legendre_xi(int k) {
    if (k < 1) throw InputError("legendre_xi: k must be >= 1");
    return 1.0 / (2.0 * std::sqrt(4.0 * k * k - 1.0));
}

namespace {

// Standard Legendre value and derivative on [-1, 1] by the three-term
// recurrence; the shifted normalized family is P_k(x) = sqrt(2k+1) L_k(2x-1).
void standard_legendre(int k, double u, double& L, double& dL) {
    double Lm = 1.0, dLm = 0.0; // L_0
    if (k == 0) { L = Lm; dL = dLm; return; }
    double Lc = u, dLc = 1.0;   // L_1
    for (int n = 1; n < k; ++n) {
        const double Ln = ((2.0 * n + 1.0) * u * Lc - n * Lm) / (n + 1.0);
        const double dLn = ((2.0 * n + 1.0) * (Lc + u * dLc) - n * dLm) / (n + 1.0);
        Lm = Lc; dLm = dLc;
        Lc = Ln; dLc = dLn;
    }
    L = Lc;
    dL = dLc;
}

} // namespace

double shifted_legendre(int k, double x) {
    if (k < 0) throw InputError("shifted_legendre: k must be >= 0");
    double L, dL;
    standard_legendre(k, 2.0 * x - 1.0, L, dL);
    return std::sqrt(2.0 * k + 1.0) * L;
}

double shifted_legendre_derivative(int k, double x) {
    if (k < 0) throw InputError("shifted_legendre_derivative: k must be >= 0");
    double L, dL;
    standard_legendre(k, 2.0 * x - 1.0, L, dL);
    return 2.0 * std::sqrt(2.0 * k + 1.0) * dL;
}

double shifted_legendre_binomial(int k, double x) {
    if (k < 0) throw InputError("shifted_legendre_binomial: k must be >= 0");
    // P_k(x) = sqrt(2k+1) sum_j binom(k,j) binom(k+j,j) (-1)^(k+j) x^j,
    // the expanded Rodrigues form.  Coefficients grow fast; intended as a
    // cross-check for small k.
    double sum = 0.0;
    double binom_kj = 1.0;   // binom(k, j)
    double binom_kjj = 1.0;  // binom(k+j, j)
    double xpow = 1.0;
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j <= k; ++j) {
        sum += sign * binom_kj * binom_kjj * xpow;
        binom_kj *= double(k - j) / double(j + 1);
        binom_kjj *= double(k + j + 1) / double(j + 1);
        xpow *= x;
        sign = -sign;
    }
    return std::sqrt(2.0 * k + 1.0) * sum;
}

void shifted_legendre_roots(int s, VecX& roots, VecX& weights) {
    if (s < 1 || s > 12)
        throw InputError("shifted_legendre_roots: s must be in [1, 12]");

    if (s == 1) {
        roots = VecX::Constant(1, 0.5);
        weights = VecX::Constant(1, 1.0);
        return;
    }

    // Symmetric Jacobi matrix of the shifted family: diagonal 1/2,
    // off-diagonal k / (2 sqrt(4k^2 - 1)).  Eigenvalues are the nodes,
    // squared first eigenvector components the weights (total mass 1).
    MatX Jm = MatX::Zero(s, s);
    for (int i = 0; i < s; ++i) Jm(i, i) = 0.5;
    for (int k = 1; k < s; ++k) {
        Jm(k - 1, k) = double(k) * legendre_xi(k);
        Jm(k, k - 1) = Jm(k - 1, k);
    }
    Eigen::SelfAdjointEigenSolver<MatX> es(Jm);
    if (es.info() != Eigen::Success)
        throw Error("shifted_legendre_roots: eigensolver failed");

    roots = es.eigenvalues();
    weights.resize(s);
    for (int i = 0; i < s; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        weights[i] = v0 * v0;
    }

    // One Newton polish per root.
    for (int i = 0; i < s; ++i) {
        const double f = shifted_legendre(s, roots[i]);
        const double df = shifted_legendre_derivative(s, roots[i]);
        if (df != 0.0) roots[i] -= f / df;
    }

    // The node set is symmetric about 1/2 and the weight set palindromic;
    // enforce both exactly.
    for (int i = 0; i < s / 2; ++i) {
        const int j = s - 1 - i;
        const double r = 0.5 * (roots[i] + (1.0 - roots[j]));
        roots[i] = r;
        roots[j] = 1.0 - r;
        const double w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if (s % 2 == 1) roots[s / 2] = 0.5;
}

VecX shifted_legendre_roots(int s) {
    VecX r, w;
    shifted_legendre_roots(s, r, w);
    return r;
}

} // namespace phdae
