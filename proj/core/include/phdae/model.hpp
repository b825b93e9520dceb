#pragma once

#include <optional>

#include "phdae/params.hpp"
#include "phdae/states.hpp"

namespace phdae {

/// Evaluation variants used by tests and diagnostics.  `Frozen` pins the
/// rotor-angle-dependent coupling at a fixed angle (the model becomes
/// linear time-varying and its energy is an exact quadratic), `Disabled`
/// removes the coupling entirely (electrical and mechanical subsystems
/// decouple).  Sources can independently be frozen in time.
enum class Coupling { Full, Frozen, Disabled };

struct ModelVariant {
    Coupling coupling = Coupling::Full;
    double frozen_theta5 = 0.0;   ///< angle used when coupling == Frozen
    std::optional<double> frozen_source_time; ///< if set, sources use this fixed time
};

/// Constant matrices of the unreduced model.
struct FullModelMatrices {
    Mat6 J = Mat6::Zero();    ///< diag(J_1..J_6)
    Mat6 K = Mat6::Zero();    ///< shaft stiffness (tridiagonal stencil)
    Mat6 K_L = Mat6::Zero();  ///< line inductance coupling
    Mat6 K_R = Mat6::Zero();  ///< conductances, rows 3..4 identically zero
    Mat6 K_C = Mat6::Zero();  ///< identically zero for this benchmark
    Mat6 D = Mat6::Zero();    ///< friction
    Vec6 T = Vec6::Zero();    ///< applied torque vector
};

/// Coefficients of the linear relation that eliminates (psi_2alpha, psi_2beta).
struct EliminationCoefficients {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Structure matrices of the reduced port-Hamiltonian descriptor form,
/// state dimension 21, effort/flow dimension 42.
struct StructureMatrices {
    Mat21 M = Mat21::Zero();
    Mat21 P = Mat21::Zero();
    Mat21 Q = Mat21::Zero();
    Mat21 N = Mat21::Zero();
    Mat21 V = Mat21::Zero();
    Mat21 S = Mat21::Zero();
    Mat21 W = Mat21::Zero();
    Mat42 Xi = Mat42::Zero();     ///< [[P, N], [-N^T, W]], antisymmetric by construction
    Mat42 Lambda = Mat42::Zero(); ///< [[Q, V], [V^T, S]], symmetric positive semidefinite
};

// ---------------------------------------------------------------------------
// Unreduced model
// ---------------------------------------------------------------------------

class FullModel {
public:
    explicit FullModel(const PhysicalParams& p, const ModelVariant& v = {});

    const PhysicalParams& params() const { return params_; }
    const ModelVariant& variant() const { return variant_; }
    const FullModelMatrices& matrices() const { return mats_; }

    /// Angle-dependent coupling matrix Gamma(theta_5), symmetric 6x6.
    Mat6 gamma(double theta5) const;
    /// d Gamma / d theta_5.
    Mat6 gamma_d5(double theta5) const;

    /// Source current vector i_s(t).
    Vec6 source_current(double t) const;

    /// Electromagnetic torque 0.5 * psi^T dGamma/dtheta5 psi.
    double em_torque(const Vec6& psi, double theta5) const;

    /// Residual of all six electrical equations K_R psi_dot + (K_L + Gamma)
    /// psi - i_s(t); the third and fourth rows are purely algebraic.
    Vec6 electrical_residual(const FullState& s) const;

    /// Residual of the two source-free algebraic rows (the rows whose
    /// conductance and capacitance entries vanish); zero along solutions.
    Vec2 consistency_residual(const FullState& s) const;

    /// Total energy: rotational kinetic + magnetic + shaft potential.
    double energy(const FullState& s) const;

    /// Instantaneous supplied and dissipated power.
    double supplied_power(const FullState& s) const;
    double dissipated_power(const FullState& s) const;

private:
    PhysicalParams params_;
    ModelVariant variant_;
    FullModelMatrices mats_;
    double gamma_denom_ = 0.0; ///< 1.5 M^2 - L_r (L_s + M_s)

    double effective_theta5(double theta5) const;
};

// ---------------------------------------------------------------------------
// Reduced model (index-1 semi-explicit DAE)
// ---------------------------------------------------------------------------

class ReducedModel {
public:
    explicit ReducedModel(const PhysicalParams& p, const ModelVariant& v = {});

    const PhysicalParams& params() const { return params_; }
    const ModelVariant& variant() const { return variant_; }

    const Mat4& K_R() const { return K_R_; }
    const Vec4& K_R_diag() const { return K_R_diag_; }
    const Mat4& K_L() const { return K_L_; }
    const Mat6& J() const { return J_; }
    const Vec6& J_diag() const { return J_diag_; }
    const Mat6& K() const { return K_; }
    const Mat6& D() const { return D_; }
    const Vec6& T() const { return T_; }

    EliminationCoefficients elimination() const { return elim_; }

    /// Reduced coupling matrix (symmetric 4x4) and its angle derivative.
    Mat4 gamma(double theta5) const;
    Mat4 gamma_d5(double theta5) const;

    /// Reduced source current vector.
    Vec4 source_current(double t) const;

    /// Electromagnetic torque 0.5 * psi_t^T dGamma/dtheta5 psi_t.
    double em_torque(const Vec4& psi_t, double theta5) const;

    /// Reconstructs the eliminated fluxes (psi_2alpha, psi_2beta).
    Vec2 reconstruct_eliminated_flux(const Vec4& psi_t, double theta5) const;
    /// Rates of the eliminated fluxes along a trajectory (needs theta_dot_5).
    Vec2 reconstruct_eliminated_flux_rate(const Vec4& psi_t, const Vec4& psi_t_dot,
                                          double theta5, double theta_dot5) const;

    /// Algebraic variable consistent with the constraint:
    /// y* = K_R^{-1} (i_s(t) - (K_L + Gamma(theta5)) psi_t).
    Vec4 consistent_flux_rate(double t, const Vec16& x) const;

    /// Right-hand side f(t, x, y) of the differential part, x = (psi_t; theta_dot; theta).
    Vec16 rhs(double t, const Vec16& x, const Vec4& y) const;

    /// Constraint residual g(t, x, y) = K_R y + (K_L + Gamma) psi_t - i_s(t).
    Vec4 constraint(double t, const Vec16& x, const Vec4& y) const;

    /// Jacobian of the eliminated vector field phi(t, x) = f(t, x, y*(t, x)).
    Mat16 rhs_jacobian(double t, const Vec16& x) const;
    Vec16 eliminated_rhs(double t, const Vec16& x) const;

    /// Hamiltonian H = 0.5 theta_dot^T J theta_dot + 0.5 psi_t^T (K_L + Gamma) psi_t
    ///              + 0.5 theta^T K theta.
    double hamiltonian(const ReducedState& s) const;

    /// Gradient of H in the descriptor state order (psi_t_dot, psi_t,
    /// theta_dot, theta, t); equals M^T z with z the effort image.
    Vec21 hamiltonian_gradient(const ReducedState& s) const;

    /// Instantaneous supplied power y^T u and dissipated power z^T Lambda z,
    /// both computable without inverting singular blocks.
    double supplied_power(const ReducedState& s) const;
    double dissipated_power(const ReducedState& s) const;

    /// Descriptor-form structure matrices (constant for this model).
    StructureMatrices structure_matrices() const;

private:
    PhysicalParams params_;
    ModelVariant variant_;
    Mat4 K_R_ = Mat4::Zero();
    Vec4 K_R_diag_ = Vec4::Zero();
    Vec4 K_R_inv_diag_ = Vec4::Zero();
    Mat4 K_L_ = Mat4::Zero();
    Mat6 J_ = Mat6::Zero();
    Vec6 J_diag_ = Vec6::Zero();
    Mat6 K_ = Mat6::Zero();
    Mat6 D_ = Mat6::Zero();
    Vec6 T_ = Vec6::Zero();
    EliminationCoefficients elim_;
    double gamma_factor_ = 0.0; ///< sqrt(3/2) M / (1.5 M^2 - L_r (L_s + M_s + L))

    double effective_theta5(double theta5) const;
};

// ---------------------------------------------------------------------------
// Free-function interface
// ---------------------------------------------------------------------------

FullModelMatrices assemble_full_matrices(const PhysicalParams& p);
Mat6 coupling_matrix_full(double theta5, const PhysicalParams& p);
Mat6 coupling_matrix_full_d5(double theta5, const PhysicalParams& p);
Mat4 coupling_matrix_reduced(double theta5, const PhysicalParams& p);
Mat4 coupling_matrix_reduced_d5(double theta5, const PhysicalParams& p);
Vec6 source_current_full(double t, const PhysicalParams& p);
Vec4 source_current_reduced(double t, const PhysicalParams& p);
EliminationCoefficients elimination_coefficients(const PhysicalParams& p);
Vec2 reconstruct_eliminated_flux(const Vec4& psi_t, double theta5, const PhysicalParams& p);
double hamiltonian(const ReducedState& s, const PhysicalParams& p);
Vec16 dae_rhs(double t, const Vec16& x, const Vec4& y, const PhysicalParams& p);
Vec4 dae_constraint(double t, const Vec16& x, const Vec4& y, const PhysicalParams& p);
StructureMatrices structure_matrices(const PhysicalParams& p);

/// Expands a reduced state to a full one; eliminated fluxes and their rates
/// come from the reconstruction relation and its time derivative.
FullState expand_state(const ReducedState& s, const PhysicalParams& p);

} // namespace phdae
