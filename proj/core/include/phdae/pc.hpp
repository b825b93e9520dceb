#pragma once

#include <memory>

#include "phdae/model.hpp"
#include "phdae/states.hpp"

namespace phdae {

/// Per-step diagnostics of the two linear solves.
struct PCStepInfo {
    double electrical_residual = 0.0; ///< ||A x - b|| / ||b|| of the electrical solve
    double mechanical_residual = 0.0;
    Vec6 theta_predicted = Vec6::Zero();
};

/// Constant blocks of the predictor-corrector schemes and the cached
/// factorization of the mechanical system matrix (constant for fixed h).
/// The electrical system matrix depends on the predicted angle and is
/// refactored every step.
class PCWorkspace {
public:
    PCWorkspace(const FullModel& model, double h);

    const FullModel& model() const { return model_; }
    double h() const { return h_; }

    /// Scheme variant I: forward-Euler angle predictor, trapezoidal
    /// electrical solve, mechanical solve with left-endpoint torque data.
    FullState pc1_step(const FullState& s, PCStepInfo* info = nullptr);

    /// Scheme variant II: same predictor and electrical solve, mechanical
    /// solve with trapezoidal torque data.
    FullState pc2_step(const FullState& s, PCStepInfo* info = nullptr);

private:
    const FullModel& model_;
    double h_ = 0.0;
    Mat12 KE1_;             // diag(K_C, I)
    Mat12 KM1_;             // diag(J, I)
    Mat12 KM2_;             // [[D, K], [-I, 0]]
    Mat12 KM_minus_;        // KM1 - h/2 KM2
    Mat12 KM_plus_;         // KM1 + h/2 KM2
    Eigen::PartialPivLU<Mat12> KM_lu_; // lu(KM_plus_)
    long step_index_ = 0;

    Mat12 assemble_KE2(double theta5) const;
    Vec12 g_E(double t) const;
    Vec12 g_M(const Vec6& psi, const Vec6& theta) const;
    FullState step_common(const FullState& s, bool trapezoidal_torque, PCStepInfo* info);
};

} // namespace phdae
