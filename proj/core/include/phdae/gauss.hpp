#pragma once

#include <vector>

#include "phdae/model.hpp"
#include "phdae/states.hpp"
#include "phdae/tableau.hpp"

namespace phdae {

/// Report for one collocation step.
struct GaussStepReport {
    int newton_iterations = 0;
    double stage_residual = 0.0;      ///< final stage-equation residual (equation units)
    double constraint_residual = 0.0; ///< max ||g|| over the stage points
};

/// Retained stage data of one step, for structure diagnostics.
struct StageRecord {
    double t_step = 0.0;              ///< step start time
    double h = 0.0;
    std::vector<double> t;            ///< stage times
    std::vector<Vec16> X;             ///< stage differential states
    std::vector<Vec4> Y;              ///< stage algebraic values
    std::vector<Vec16> Xdot;          ///< stage derivatives of x
    std::vector<Vec4> Ydot;           ///< stage derivatives of y
};

struct GaussOptions {
    /// Stage-equation residual tolerance, relative to the equation scale of
    /// the step (see GaussDaeStepper::equation_scale).
    double newton_tol = 1e-12;
    /// Generous cap: with the Jacobian frozen at the first stage the
    /// contraction degrades near h ~ 1e-3 where the rotor angle sweeps a
    /// large fraction of a radian per step.
    int max_iterations = 120;
    /// Jacobian is refreshed whenever the residual contraction factor
    /// between consecutive iterations exceeds this.
    double refresh_threshold = 0.5;
    /// A step rejects its input state when the constraint defect exceeds
    /// this fraction of the source amplitude.  The algebraic variable of a
    /// semi-explicit index-1 DAE is determined by the differential state;
    /// feeding a grossly inconsistent pair would silently corrupt the
    /// y-update, so it is an error instead.  The bound is loose on purpose:
    /// the method's own endpoint defect is O(h^2) with a constant on the
    /// order of the source, so coarse steps legitimately carry defects of
    /// a few percent.
    double consistency_tol = 0.1;
};

/// s-stage Gauss collocation applied directly to the reduced semi-explicit
/// DAE.  Stage algebraic variables are eliminated in closed form through
/// the (diagonal, invertible) conductance matrix; the remaining nonlinear
/// system in the stacked stage derivatives is solved by simplified Newton
/// with an analytic Jacobian.
class GaussDaeStepper {
public:
    GaussDaeStepper(const ReducedModel& model, const ButcherTableau& tableau,
                    const GaussOptions& opts = {});

    const ButcherTableau& tableau() const { return tableau_; }
    const ReducedModel& model() const { return model_; }

    /// Advances (x, y) by one step of size h.  Optionally fills a step
    /// report and retains the stage data.
    ReducedState step(const ReducedState& s, double h,
                      GaussStepReport* report = nullptr,
                      StageRecord* stages = nullptr);

    /// Equation-unit scale used for the Newton tolerance of the last step.
    double last_equation_scale() const { return last_scale_; }

private:
    const ReducedModel& model_;
    ButcherTableau tableau_;
    GaussOptions opts_;
    long step_index_ = 0;
    double last_scale_ = 1.0;

    // workspace (sized 16 s)
    Eigen::VectorXd kstack_;
    Eigen::VectorXd fstack_;
    Eigen::MatrixXd W_;
    Eigen::PartialPivLU<Eigen::MatrixXd> W_lu_;

    void build_newton_matrix(double t, const Vec16& x, double h);
    /// Stage residual in equation units: blockdiag(K_L, J, K) (phi - k) per stage.
    double equation_residual(double tn, const Vec16& xn, double h,
                             const Eigen::VectorXd& kstack, Eigen::VectorXd& fstack) const;
};

} // namespace phdae
