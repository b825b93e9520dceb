#include "phdae/pc.hpp"

#include <cmath>
#include <sstream>

#include "phdae/errors.hpp"

namespace phdae {

namespace {

constexpr double kResidualLimit = 1e-8;

double solve_residual(const Mat12& A, const Vec12& x, const Vec12& b) {
    const double bnorm = b.lpNorm<Eigen::Infinity>();
    return (A * x - b).lpNorm<Eigen::Infinity>() / (bnorm > 0.0 ? bnorm : 1.0);
}

void check_solution(const Vec12& x, double residual, const char* which, long step) {
    if (!x.allFinite() || residual > kResidualLimit) {
        std::ostringstream os;
        os << which << " solve failed at step " << step
           << " (relative residual " << residual << ")";
        throw SingularSystemError(os.str());
    }
}

} // namespace

PCWorkspace::PCWorkspace(const FullModel& model, double h) : model_(model), h_(h) {
    if (!(h > 0.0)) throw InputError("PCWorkspace: step size must be positive");
    const auto& m = model.matrices();

    KE1_.setZero();
    KE1_.topLeftCorner<6, 6>() = m.K_C;
    KE1_.bottomRightCorner<6, 6>() = Mat6::Identity();

    KM1_.setZero();
    KM1_.topLeftCorner<6, 6>() = m.J;
    KM1_.bottomRightCorner<6, 6>() = Mat6::Identity();

    KM2_.setZero();
    KM2_.topLeftCorner<6, 6>() = m.D;
    KM2_.topRightCorner<6, 6>() = m.K;
    KM2_.bottomLeftCorner<6, 6>() = -Mat6::Identity();

    KM_minus_ = KM1_ - 0.5 * h * KM2_;
    KM_plus_ = KM1_ + 0.5 * h * KM2_;
    KM_lu_.compute(KM_plus_);
}

Mat12 PCWorkspace::assemble_KE2(double theta5) const {
    const auto& m = model_.matrices();
    Mat12 KE2 = Mat12::Zero();
    KE2.topLeftCorner<6, 6>() = m.K_R;
    KE2.topRightCorner<6, 6>() = m.K_L + model_.gamma(theta5);
    KE2.bottomLeftCorner<6, 6>() = -Mat6::Identity();
    return KE2;
}

Vec12 PCWorkspace::g_E(double t) const {
    Vec12 g = Vec12::Zero();
    g.head<6>() = model_.source_current(t);
    return g;
}

Vec12 PCWorkspace::g_M(const Vec6& psi, const Vec6& theta) const {
    Vec12 g = Vec12::Zero();
    g.head<6>() = model_.matrices().T;
    g[4] -= model_.em_torque(psi, theta[4]);
    return g;
}

FullState PCWorkspace::step_common(const FullState& s, bool trapezoidal_torque,
                                   PCStepInfo* info) {
    const double t1 = s.t + h_;
    ++step_index_;

    // (i) explicit angle predictor
    const Vec6 theta_pred = s.theta + h_ * s.theta_dot;

    // (ii) trapezoidal electrical solve at the predicted angle
    const Mat12 KE2_new = assemble_KE2(theta_pred[4]);
    const Mat12 KE2_old = assemble_KE2(s.theta[4]);
    const Mat12 AE = KE1_ + 0.5 * h_ * KE2_new;
    const Vec12 bE = (KE1_ - 0.5 * h_ * KE2_old) * s.electrical()
                   + 0.5 * h_ * (g_E(s.t) + g_E(t1));
    const Vec12 xE = AE.partialPivLu().solve(bE);
    const double rE = solve_residual(AE, xE, bE);
    check_solution(xE, rE, "electrical", step_index_);

    // (iii) mechanical solve; torque data is either left-endpoint or
    // trapezoidal over (old state, corrected fluxes at predicted angle)
    Vec12 torque;
    if (trapezoidal_torque) {
        const Vec6 psi_new = xE.tail<6>();
        torque = 0.5 * (g_M(s.psi, s.theta) + g_M(psi_new, theta_pred));
    } else {
        torque = g_M(s.psi, s.theta);
    }
    const Vec12 bM = KM_minus_ * s.mechanical() + h_ * torque;
    const Vec12 xM = KM_lu_.solve(bM);
    const double rM = solve_residual(KM_plus_, xM, bM);
    check_solution(xM, rM, "mechanical", step_index_);

    if (info) {
        info->electrical_residual = rE;
        info->mechanical_residual = rM;
        info->theta_predicted = theta_pred;
    }

    FullState out;
    out.set_electrical(xE);
    out.set_mechanical(xM);
    out.t = t1;
    return out;
}

FullState PCWorkspace::pc1_step(const FullState& s, PCStepInfo* info) {
    return step_common(s, false, info);
}

FullState PCWorkspace::pc2_step(const FullState& s, PCStepInfo* info) {
    return step_common(s, true, info);
}

} // namespace phdae
