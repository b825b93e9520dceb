#pragma once

#include <vector>

#include "phdae/gauss.hpp"
#include "phdae/model.hpp"

namespace phdae {

/// One row of the power-balance ledger.
struct PowerLedgerEntry {
    double t = 0.0;
    double H = 0.0;
    double supplied = 0.0;    ///< y^T u
    double dissipated = 0.0;  ///< z^T Lambda z >= 0
    double balance_residual = 0.0; ///< dH/dt - supplied + dissipated (when evaluable)
};

/// Instantaneous power terms at a reduced state.
PowerLedgerEntry power_terms(const ReducedState& s, const ReducedModel& model);

/// Per-step residual of the discrete power balance along a Gauss trajectory:
///   r_n = H(x_{n+1}) - H(x_n) - h sum_j b_j (y_j^T u_j - dissipated_j),
/// evaluated from the retained stage data.  Exact (up to roundoff and the
/// stage tolerance) when the Hamiltonian is quadratic, i.e. for the frozen
/// coupling variant.
struct DissipationCheck {
    std::vector<double> residuals;
    std::vector<double> scales;      ///< max(1, |H(x_n)|) per step
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;   ///< residual relative to its scale
};

DissipationCheck discrete_dissipation_check(const std::vector<StageRecord>& steps,
                                            const std::vector<ReducedState>& states,
                                            const ButcherTableau& tableau,
                                            const ReducedModel& model);

/// Infinity norm of the kernel-representation residual of the generalized
/// Dirac structure at one stage point: the flow/effort pair built from the
/// stage data must satisfy the 84 linear kernel equations.  Computed without
/// inverting the singular gauge blocks.
double dirac_membership_residual(double t, const Vec16& x, const Vec4& y,
                                 const Vec16& xdot, const Vec4& ydot,
                                 const ReducedModel& model);

/// Convenience: max residual over the stages of a record.
double dirac_membership_residual(const StageRecord& rec, const ReducedModel& model);

/// Cumulative power-balance audit of a Gauss run: at every step, checks
///   H(x_n) - H(x_0) <= sum of the method's own quadrature of y^T u + tol,
/// with tol = tol_rel * max(1, |H|).  Returns the number of violations.
struct BalanceAudit {
    long violations = 0;
    double max_excess = 0.0;      ///< worst violation amount (0 if none)
    double min_margin = 0.0;      ///< smallest slack observed
};

BalanceAudit cumulative_balance_audit(const std::vector<StageRecord>& steps,
                                      const std::vector<ReducedState>& states,
                                      const ButcherTableau& tableau,
                                      const ReducedModel& model,
                                      double tol_rel = 1e-8);

/// Per-step energy residual statistics of a predictor-corrector trajectory,
/// using trapezoidal quadrature of the full-model power balance.
struct EnergyResidualStats {
    double max_abs = 0.0;
    double rms = 0.0;
};

EnergyResidualStats pc_energy_residuals(const std::vector<FullState>& states,
                                        const FullModel& model);

} // namespace phdae
