#include "phdae/gauss.hpp"

#include <cmath>
#include <sstream>

#include "phdae/errors.hpp"

namespace phdae {

GaussDaeStepper::GaussDaeStepper(const ReducedModel& model, const ButcherTableau& tableau,
                                 const GaussOptions& opts)
    : model_(model), tableau_(tableau), opts_(opts) {
    if (tableau_.s < 1) throw InputError("GaussDaeStepper: empty tableau");
    const int n = 16 * tableau_.s;
    kstack_.resize(n);
    fstack_.resize(n);
    W_.resize(n, n);
}

void GaussDaeStepper::build_newton_matrix(double t, const Vec16& x, double h) {
    const int s = tableau_.s;
    const Mat16 Jphi = model_.rhs_jacobian(t, x);
    W_.setIdentity();
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            W_.block<16, 16>(16 * i, 16 * j) -= h * tableau_.A(i, j) * Jphi;
    W_lu_.compute(W_);
}

double GaussDaeStepper::equation_residual(double tn, const Vec16& xn, double h,
                                          const Eigen::VectorXd& kstack,
                                          Eigen::VectorXd& fstack) const {
    const int s = tableau_.s;
    double rmax = 0.0;
    for (int i = 0; i < s; ++i) {
        Vec16 Xi = xn;
        for (int j = 0; j < s; ++j)
            Xi += h * tableau_.A(i, j) * kstack.segment<16>(16 * j);
        const double ti = tn + tableau_.c[i] * h;
        const Vec16 phi = model_.eliminated_rhs(ti, Xi);
        const Vec16 diff = phi - kstack.segment<16>(16 * i);
        fstack.segment<16>(16 * i) = phi;

        // residual in equation units: blockdiag(K_L, J, K) (phi - k)
        double r = (model_.K_L() * diff.head<4>()).lpNorm<Eigen::Infinity>();
        r = std::max(r, model_.J_diag().cwiseProduct(diff.segment<6>(4))
                            .lpNorm<Eigen::Infinity>());
        r = std::max(r, (model_.K() * diff.tail<6>()).lpNorm<Eigen::Infinity>());
        rmax = std::max(rmax, r);
    }
    return rmax;
}

ReducedState GaussDaeStepper::step(const ReducedState& s0, double h,
                                   GaussStepReport* report, StageRecord* stages) {
    if (!(h > 0.0)) throw InputError("GaussDaeStepper: step size must be positive");
    const int s = tableau_.s;
    ++step_index_;

    const double tn = s0.t;
    const Vec16 xn = s0.differential();

    const double g0 = model_.constraint(tn, xn, s0.psi_t_dot).lpNorm<Eigen::Infinity>();
    const double gscale =
        std::max(1.0, model_.source_current(tn).lpNorm<Eigen::Infinity>());
    if (!(g0 <= opts_.consistency_tol * gscale)) {
        std::ostringstream os;
        os << "inconsistent state passed to stage solver at step " << step_index_
           << " (constraint defect " << g0 << ", scale " << gscale << ")";
        throw InputError(os.str());
    }

    // constant initial guess: the eliminated vector field at the step start
    const Vec16 phi0 = model_.eliminated_rhs(tn, xn);
    for (int i = 0; i < s; ++i) kstack_.segment<16>(16 * i) = phi0;

    // equation-unit scale for the stage tolerance
    double scale = 1.0;
    scale = std::max(scale, (model_.K_L() * phi0.head<4>()).lpNorm<Eigen::Infinity>());
    scale = std::max(scale, model_.J_diag().cwiseProduct(phi0.segment<6>(4))
                                .lpNorm<Eigen::Infinity>());
    scale = std::max(scale, (model_.K() * phi0.tail<6>()).lpNorm<Eigen::Infinity>());
    last_scale_ = scale;
    const double tol = opts_.newton_tol * scale;

    build_newton_matrix(tn, xn, h);

    double residual = equation_residual(tn, xn, h, kstack_, fstack_);
    double prev_residual = residual;
    int iterations = 0;
    int growth_count = 0;
    int stall_count = 0;
    while (residual > tol) {
        // the residual evaluation has its own roundoff floor, which can sit
        // above tol at coarse steps or large state magnitudes; accept an
        // iterate that has stopped improving as long as it landed within a
        // moderate factor of tol (observed floors are 1-3x tol)
        if (stall_count >= 3 && residual <= 50.0 * tol) break;
        if (iterations >= opts_.max_iterations) {
            std::ostringstream os;
            os << "stage iteration did not converge at step " << step_index_
               << " (residual " << residual << ", tol " << tol << ")";
            throw NewtonDivergenceError(os.str());
        }
        // simplified Newton update: W delta = k - phi(k)
        Eigen::VectorXd delta = W_lu_.solve(kstack_ - fstack_);
        if (!delta.allFinite())
            throw SingularSystemError("stage solve produced non-finite update at step "
                                      + std::to_string(step_index_));
        kstack_ -= delta;
        ++iterations;

        residual = equation_residual(tn, xn, h, kstack_, fstack_);
        if (!std::isfinite(residual))
            throw NewtonDivergenceError("stage residual diverged at step "
                                        + std::to_string(step_index_));
        if (residual > 50.0 * tol && residual > opts_.refresh_threshold * prev_residual) {
            if (residual > prev_residual && ++growth_count >= 2) {
                std::ostringstream os;
                os << "stage iteration diverging at step " << step_index_
                   << " (residual " << residual << ")";
                throw NewtonDivergenceError(os.str());
            }
            // slow contraction: refresh the Jacobian at the current first stage
            Vec16 X1 = xn;
            for (int j = 0; j < s; ++j)
                X1 += h * tableau_.A(0, j) * kstack_.segment<16>(16 * j);
            build_newton_matrix(tn + tableau_.c[0] * h, X1, h);
        }
        stall_count = (residual > 0.9 * prev_residual) ? stall_count + 1 : 0;
        prev_residual = residual;
    }

    // stage states and algebraic stage values
    std::vector<Vec16> X(static_cast<size_t>(s));
    std::vector<Vec4> Y(static_cast<size_t>(s));
    std::vector<double> ts(static_cast<size_t>(s));
    double constraint_residual = 0.0;
    for (int i = 0; i < s; ++i) {
        Vec16 Xi = xn;
        for (int j = 0; j < s; ++j)
            Xi += h * tableau_.A(i, j) * kstack_.segment<16>(16 * j);
        const double ti = tn + tableau_.c[i] * h;
        const Vec4 Yi = model_.consistent_flux_rate(ti, Xi);
        constraint_residual = std::max(constraint_residual,
            model_.constraint(ti, Xi, Yi).lpNorm<Eigen::Infinity>());
        X[size_t(i)] = Xi;
        Y[size_t(i)] = Yi;
        ts[size_t(i)] = ti;
    }

    // differential update x_{n+1} = x_n + h sum b_i k_i
    Vec16 xnext = xn;
    for (int i = 0; i < s; ++i)
        xnext += h * tableau_.b[i] * kstack_.segment<16>(16 * i);

    // algebraic update y_{n+1} = rho y_n + sum w_i Y_i, w = b^T A^{-1}
    Vec4 ynext = tableau_.rho * s0.psi_t_dot;
    for (int i = 0; i < s; ++i) ynext += tableau_.w[i] * Y[size_t(i)];

    if (report) {
        report->newton_iterations = iterations;
        report->stage_residual = residual;
        report->constraint_residual = constraint_residual;
    }
    if (stages) {
        stages->t_step = tn;
        stages->h = h;
        stages->t = ts;
        stages->X = X;
        stages->Y = Y;
        stages->Xdot.resize(size_t(s));
        stages->Ydot.resize(size_t(s));
        for (int i = 0; i < s; ++i) {
            stages->Xdot[size_t(i)] = kstack_.segment<16>(16 * i);
            Vec4 yd = Vec4::Zero();
            for (int j = 0; j < s; ++j)
                yd += tableau_.A_inv(i, j) * (Y[size_t(j)] - s0.psi_t_dot);
            stages->Ydot[size_t(i)] = yd / h;
        }
    }

    ReducedState out;
    out.set_differential(xnext);
    out.psi_t_dot = ynext;
    out.t = tn + h;
    return out;
}

} // namespace phdae
