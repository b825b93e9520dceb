#include "phdae/model.hpp"

#include <cmath>

#include "phdae/errors.hpp"

namespace phdae {

namespace {

constexpr double kSqrt32 = 1.2247448713915890; // sqrt(3/2)

double full_denominator(const PhysicalParams& p) {
    return 1.5 * p.M * p.M - p.L_r * (p.L_s + p.M_s);
}

double reduced_denominator(const PhysicalParams& p) {
    return 1.5 * p.M * p.M - p.L_r * (p.L_s + p.M_s + p.L);
}

Mat6 shaft_stiffness(const PhysicalParams& p) {
    const auto& k = p.K_shaft;
    Mat6 K = Mat6::Zero();
    K(0, 0) = k[0];
    K(0, 1) = -k[0];
    for (int i = 1; i < 5; ++i) {
        K(i, i - 1) = -k[i - 1];
        K(i, i) = k[i - 1] + k[i];
        K(i, i + 1) = -k[i];
    }
    K(5, 4) = -k[4];
    K(5, 5) = k[4];
    return K;
}

} // namespace

// ---------------------------------------------------------------------------
// FullModel
// ---------------------------------------------------------------------------

FullModel::FullModel(const PhysicalParams& p, const ModelVariant& v)
    : params_(p), variant_(v) {
    validate_params(p);
    mats_ = assemble_full_matrices(p);
    gamma_denom_ = full_denominator(p);
}

double FullModel::effective_theta5(double theta5) const {
    return variant_.coupling == Coupling::Frozen ? variant_.frozen_theta5 : theta5;
}

Mat6 FullModel::gamma(double theta5) const {
    if (variant_.coupling == Coupling::Disabled) return Mat6::Zero();
    return coupling_matrix_full(effective_theta5(theta5), params_);
}

Mat6 FullModel::gamma_d5(double theta5) const {
    if (variant_.coupling != Coupling::Full) return Mat6::Zero();
    return coupling_matrix_full_d5(theta5, params_);
}

Vec6 FullModel::source_current(double t) const {
    if (variant_.frozen_source_time) t = *variant_.frozen_source_time;
    return source_current_full(t, params_);
}

double FullModel::em_torque(const Vec6& psi, double theta5) const {
    if (variant_.coupling != Coupling::Full) return 0.0;
    return 0.5 * psi.dot(coupling_matrix_full_d5(theta5, params_) * psi);
}

Vec6 FullModel::electrical_residual(const FullState& s) const {
    return mats_.K_R * s.psi_dot + (mats_.K_L + gamma(s.theta[4])) * s.psi
           - source_current(s.t);
}

Vec2 FullModel::consistency_residual(const FullState& s) const {
    const Vec6 r = (mats_.K_L + gamma(s.theta[4])) * s.psi;
    return Vec2(r[2], r[3]);
}

double FullModel::energy(const FullState& s) const {
    const Mat6 flux_form = mats_.K_L + gamma(s.theta[4]);
    return 0.5 * s.theta_dot.dot(mats_.J * s.theta_dot)
         + 0.5 * s.psi.dot(flux_form * s.psi)
         + 0.5 * s.theta.dot(mats_.K * s.theta);
}

double FullModel::supplied_power(const FullState& s) const {
    return s.psi_dot.dot(source_current(s.t)) + s.theta_dot.dot(mats_.T);
}

double FullModel::dissipated_power(const FullState& s) const {
    return s.psi_dot.dot(mats_.K_R * s.psi_dot) + s.theta_dot.dot(mats_.D * s.theta_dot);
}

// ---------------------------------------------------------------------------
// ReducedModel
// ---------------------------------------------------------------------------

ReducedModel::ReducedModel(const PhysicalParams& p, const ModelVariant& v)
    : params_(p), variant_(v) {
    validate_params(p);
    K_R_diag_ << 1.0 / p.R, 1.0 / p.R, 1.0 / p.R_f, 1.0 / p.R_q;
    K_R_inv_diag_ << p.R, p.R, p.R_f, p.R_q;
    K_R_ = K_R_diag_.asDiagonal();

    const double d = reduced_denominator(p);
    const double chain = p.L_s + p.M_s + p.L;
    K_L_ = Vec4(-p.L_r / d, -p.L_r / d, -chain / d, -chain / d).asDiagonal();

    J_diag_ = p.J;
    J_ = p.J.asDiagonal();
    K_ = shaft_stiffness(p);
    D_ = p.D;
    T_ = p.torque_vector();

    elim_.lambda1 = full_denominator(p) / d;
    elim_.lambda2 = kSqrt32 * p.M * p.L / d;
    gamma_factor_ = kSqrt32 * p.M / d;
}

double ReducedModel::effective_theta5(double theta5) const {
    return variant_.coupling == Coupling::Frozen ? variant_.frozen_theta5 : theta5;
}

Mat4 ReducedModel::gamma(double theta5) const {
    if (variant_.coupling == Coupling::Disabled) return Mat4::Zero();
    return coupling_matrix_reduced(effective_theta5(theta5), params_);
}

Mat4 ReducedModel::gamma_d5(double theta5) const {
    if (variant_.coupling != Coupling::Full) return Mat4::Zero();
    return coupling_matrix_reduced_d5(theta5, params_);
}

Vec4 ReducedModel::source_current(double t) const {
    if (variant_.frozen_source_time) t = *variant_.frozen_source_time;
    return source_current_reduced(t, params_);
}

double ReducedModel::em_torque(const Vec4& psi_t, double theta5) const {
    if (variant_.coupling != Coupling::Full) return 0.0;
    return 0.5 * psi_t.dot(coupling_matrix_reduced_d5(theta5, params_) * psi_t);
}

Vec2 ReducedModel::reconstruct_eliminated_flux(const Vec4& psi_t, double theta5) const {
    const double c = std::cos(effective_theta5(theta5));
    const double s = std::sin(effective_theta5(theta5));
    const double l1 = elim_.lambda1;
    const double l2 = variant_.coupling == Coupling::Disabled ? 0.0 : elim_.lambda2;
    return Vec2(l1 * psi_t[0] + l2 * (-psi_t[2] * c + psi_t[3] * s),
                l1 * psi_t[1] + l2 * (-psi_t[2] * s - psi_t[3] * c));
}

Vec2 ReducedModel::reconstruct_eliminated_flux_rate(const Vec4& psi_t, const Vec4& psi_t_dot,
                                                    double theta5, double theta_dot5) const {
    const double c = std::cos(effective_theta5(theta5));
    const double s = std::sin(effective_theta5(theta5));
    const double l1 = elim_.lambda1;
    const double l2 = variant_.coupling == Coupling::Disabled ? 0.0 : elim_.lambda2;
    const double w = variant_.coupling == Coupling::Full ? theta_dot5 : 0.0;
    return Vec2(l1 * psi_t_dot[0] + l2 * (-psi_t_dot[2] * c + psi_t_dot[3] * s)
                    + l2 * w * (psi_t[2] * s + psi_t[3] * c),
                l1 * psi_t_dot[1] + l2 * (-psi_t_dot[2] * s - psi_t_dot[3] * c)
                    + l2 * w * (-psi_t[2] * c + psi_t[3] * s));
}

Vec4 ReducedModel::consistent_flux_rate(double t, const Vec16& x) const {
    const Vec4 psi_t = x.head<4>();
    const double theta5 = x[14];
    const Vec4 residual_free = source_current(t) - K_L_ * psi_t - gamma(theta5) * psi_t;
    return K_R_inv_diag_.cwiseProduct(residual_free);
}

Vec16 ReducedModel::rhs(double t, const Vec16& x, const Vec4& y) const {
    const Vec4 psi_t = x.head<4>();
    const Vec6 theta_dot = x.segment<6>(4);
    const Vec6 theta = x.tail<6>();

    Vec6 torque = T_ - D_ * theta_dot - K_ * theta;
    torque[4] -= em_torque(psi_t, theta[4]);

    Vec16 f;
    f.head<4>() = y;
    f.segment<6>(4) = torque.cwiseQuotient(J_diag_);
    f.tail<6>() = theta_dot;
    return f;
}

Vec4 ReducedModel::constraint(double t, const Vec16& x, const Vec4& y) const {
    const Vec4 psi_t = x.head<4>();
    const double theta5 = x[14];
    return K_R_diag_.cwiseProduct(y) + (K_L_ + gamma(theta5)) * psi_t - source_current(t);
}

Vec16 ReducedModel::eliminated_rhs(double t, const Vec16& x) const {
    return rhs(t, x, consistent_flux_rate(t, x));
}

Mat16 ReducedModel::rhs_jacobian(double t, const Vec16& x) const {
    (void)t;
    const Vec4 psi_t = x.head<4>();
    const double theta5 = x[14];

    Mat16 J = Mat16::Zero();
    const Mat4 flux_form = K_L_ + gamma(theta5);
    J.block<4, 4>(0, 0) = -(K_R_inv_diag_.asDiagonal() * flux_form);

    if (variant_.coupling == Coupling::Full) {
        const Mat4 dG = coupling_matrix_reduced_d5(theta5, params_);
        const Vec4 dG_psi = dG * psi_t;
        J.block<4, 1>(0, 14) = -K_R_inv_diag_.cwiseProduct(dG_psi);
        J.block<1, 4>(8, 0) = -dG_psi.transpose() / J_diag_[4];
        // d/dtheta5 of the torque: second angle derivative of the coupling
        // is minus the coupling itself (pure trigonometric dependence).
        J(8, 14) = 0.5 * psi_t.dot(gamma(theta5) * psi_t) / J_diag_[4];
    }

    J.block<6, 6>(4, 4) = -(J_diag_.cwiseInverse().asDiagonal() * D_);
    J.block<6, 6>(4, 10) += -(J_diag_.cwiseInverse().asDiagonal() * K_);
    J.block<6, 6>(10, 4) = Mat6::Identity();
    return J;
}

double ReducedModel::hamiltonian(const ReducedState& s) const {
    const Mat4 flux_form = K_L_ + gamma(s.theta[4]);
    return 0.5 * s.theta_dot.dot(J_ * s.theta_dot)
         + 0.5 * s.psi_t.dot(flux_form * s.psi_t)
         + 0.5 * s.theta.dot(K_ * s.theta);
}

Vec21 ReducedModel::hamiltonian_gradient(const ReducedState& s) const {
    Vec21 g = Vec21::Zero();
    g.segment<4>(4) = (K_L_ + gamma(s.theta[4])) * s.psi_t;
    g.segment<6>(8) = J_diag_.cwiseProduct(s.theta_dot);
    Vec6 gtheta = K_ * s.theta;
    gtheta[4] += em_torque(s.psi_t, s.theta[4]);
    g.segment<6>(14) = gtheta;
    return g;
}

double ReducedModel::supplied_power(const ReducedState& s) const {
    return s.psi_t_dot.dot(source_current(s.t)) + s.theta_dot.dot(T_);
}

double ReducedModel::dissipated_power(const ReducedState& s) const {
    return s.psi_t_dot.dot(K_R_diag_.cwiseProduct(s.psi_t_dot))
         + s.theta_dot.dot(D_ * s.theta_dot);
}

StructureMatrices ReducedModel::structure_matrices() const {
    StructureMatrices m;
    // state order: psi_t_dot (0..3), psi_t (4..7), theta_dot (8..13),
    // theta (14..19), t (20)
    m.M.block<4, 4>(4, 4) = K_L_;
    m.M.block<6, 6>(8, 8) = J_;
    m.M.block<6, 6>(14, 14) = K_;
    m.M(20, 20) = 1.0;

    m.N.block<4, 4>(0, 0) = Mat4::Identity();
    m.N.block<6, 6>(8, 8) = Mat6::Identity();
    m.N(20, 20) = 1.0;

    m.P.block<4, 4>(0, 4) = -K_L_;
    m.P.block<6, 6>(8, 14) = -K_;
    m.P.block<4, 4>(4, 0) = -m.P.block<4, 4>(0, 4).transpose();
    m.P.block<6, 6>(14, 8) = -m.P.block<6, 6>(8, 14).transpose();

    m.Q.block<4, 4>(0, 0) = K_R_;
    m.Q.block<6, 6>(8, 8) = D_;

    m.Xi.topLeftCorner<21, 21>() = m.P;
    m.Xi.topRightCorner<21, 21>() = m.N;
    m.Xi.bottomLeftCorner<21, 21>() = -m.N.transpose();
    m.Xi.bottomRightCorner<21, 21>() = m.W;

    m.Lambda.topLeftCorner<21, 21>() = m.Q;
    m.Lambda.topRightCorner<21, 21>() = m.V;
    m.Lambda.bottomLeftCorner<21, 21>() = m.V.transpose();
    m.Lambda.bottomRightCorner<21, 21>() = m.S;
    return m;
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

FullModelMatrices assemble_full_matrices(const PhysicalParams& p) {
    FullModelMatrices m;
    m.J = p.J.asDiagonal();
    m.K = shaft_stiffness(p);

    const double Linv = 1.0 / p.L;
    m.K_L.setZero();
    m.K_L(0, 0) = Linv;
    m.K_L(1, 1) = Linv;
    m.K_L(2, 2) = Linv;
    m.K_L(3, 3) = Linv;
    m.K_L(0, 2) = -Linv;
    m.K_L(2, 0) = -Linv;
    m.K_L(1, 3) = -Linv;
    m.K_L(3, 1) = -Linv;

    m.K_R.setZero();
    m.K_R(0, 0) = 1.0 / p.R;
    m.K_R(1, 1) = 1.0 / p.R;
    m.K_R(4, 4) = 1.0 / p.R_f;
    m.K_R(5, 5) = 1.0 / p.R_q;

    m.K_C.setZero();
    m.D = p.D;
    m.T = p.torque_vector();
    return m;
}

Mat6 coupling_matrix_full(double theta5, const PhysicalParams& p) {
    const double d = full_denominator(p);
    const double mc = kSqrt32 * p.M * std::cos(theta5);
    const double ms = kSqrt32 * p.M * std::sin(theta5);
    Mat6 g = Mat6::Zero();
    g(2, 2) = -p.L_r;
    g(3, 3) = -p.L_r;
    g(4, 4) = -(p.L_s + p.M_s);
    g(5, 5) = -(p.L_s + p.M_s);
    g(2, 4) = mc;
    g(4, 2) = mc;
    g(2, 5) = -ms;
    g(5, 2) = -ms;
    g(3, 4) = ms;
    g(4, 3) = ms;
    g(3, 5) = mc;
    g(5, 3) = mc;
    return g / d;
}

Mat6 coupling_matrix_full_d5(double theta5, const PhysicalParams& p) {
    const double d = full_denominator(p);
    const double mc = kSqrt32 * p.M * std::cos(theta5);
    const double ms = kSqrt32 * p.M * std::sin(theta5);
    Mat6 g = Mat6::Zero();
    g(2, 4) = -ms;
    g(4, 2) = -ms;
    g(2, 5) = -mc;
    g(5, 2) = -mc;
    g(3, 4) = mc;
    g(4, 3) = mc;
    g(3, 5) = -ms;
    g(5, 3) = -ms;
    return g / d;
}

Mat4 coupling_matrix_reduced(double theta5, const PhysicalParams& p) {
    const double f = kSqrt32 * p.M / reduced_denominator(p);
    const double c = f * std::cos(theta5);
    const double s = f * std::sin(theta5);
    Mat4 g = Mat4::Zero();
    g(0, 2) = c;
    g(2, 0) = c;
    g(0, 3) = -s;
    g(3, 0) = -s;
    g(1, 2) = s;
    g(2, 1) = s;
    g(1, 3) = c;
    g(3, 1) = c;
    return g;
}

Mat4 coupling_matrix_reduced_d5(double theta5, const PhysicalParams& p) {
    const double f = kSqrt32 * p.M / reduced_denominator(p);
    const double c = f * std::cos(theta5);
    const double s = f * std::sin(theta5);
    Mat4 g = Mat4::Zero();
    g(0, 2) = -s;
    g(2, 0) = -s;
    g(0, 3) = -c;
    g(3, 0) = -c;
    g(1, 2) = c;
    g(2, 1) = c;
    g(1, 3) = -s;
    g(3, 1) = -s;
    return g;
}

Vec6 source_current_full(double t, const PhysicalParams& p) {
    Vec6 i = Vec6::Zero();
    i[0] = p.U_s / p.R * std::cos(p.omega_s * t);
    i[1] = p.U_s / p.R * std::sin(p.omega_s * t);
    i[4] = p.U_f / p.R_f;
    return i;
}

Vec4 source_current_reduced(double t, const PhysicalParams& p) {
    Vec4 i;
    i << p.U_s / p.R * std::cos(p.omega_s * t),
         p.U_s / p.R * std::sin(p.omega_s * t),
         p.U_f / p.R_f,
         0.0;
    return i;
}

EliminationCoefficients elimination_coefficients(const PhysicalParams& p) {
    const double d = reduced_denominator(p);
    if (d == 0.0) throw InputError("reduction denominator vanishes");
    return {full_denominator(p) / d, kSqrt32 * p.M * p.L / d};
}

Vec2 reconstruct_eliminated_flux(const Vec4& psi_t, double theta5, const PhysicalParams& p) {
    return ReducedModel(p).reconstruct_eliminated_flux(psi_t, theta5);
}

double hamiltonian(const ReducedState& s, const PhysicalParams& p) {
    return ReducedModel(p).hamiltonian(s);
}

Vec16 dae_rhs(double t, const Vec16& x, const Vec4& y, const PhysicalParams& p) {
    return ReducedModel(p).rhs(t, x, y);
}

Vec4 dae_constraint(double t, const Vec16& x, const Vec4& y, const PhysicalParams& p) {
    return ReducedModel(p).constraint(t, x, y);
}

StructureMatrices structure_matrices(const PhysicalParams& p) {
    return ReducedModel(p).structure_matrices();
}

FullState expand_state(const ReducedState& s, const PhysicalParams& p) {
    ReducedModel model(p);
    const Vec2 psi2 = model.reconstruct_eliminated_flux(s.psi_t, s.theta[4]);
    const Vec2 psi2_dot = model.reconstruct_eliminated_flux_rate(s.psi_t, s.psi_t_dot,
                                                                 s.theta[4], s.theta_dot[4]);
    FullState f;
    f.psi << s.psi_t[0], s.psi_t[1], psi2[0], psi2[1], s.psi_t[2], s.psi_t[3];
    f.psi_dot << s.psi_t_dot[0], s.psi_t_dot[1], psi2_dot[0], psi2_dot[1],
                 s.psi_t_dot[2], s.psi_t_dot[3];
    f.theta_dot = s.theta_dot;
    f.theta = s.theta;
    f.t = s.t;
    return f;
}

} // namespace phdae
