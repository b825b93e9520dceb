#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phdae/gauss.hpp"
#include "phdae/initial_state.hpp"
#include "phdae/model.hpp"
#include "phdae/pc.hpp"

namespace phdae {

/// Integration method selector, parsed from "pc1", "pc2" or "gauss:S".
struct Method {
    enum class Kind { PC1, PC2, Gauss } kind = Kind::Gauss;
    int stages = 1;

    static Method parse(const std::string& text);
    std::string name() const;
    bool is_reduced() const { return kind == Kind::Gauss; }
};

/// One output frame of a run.  For reduced runs `flux` has 4 entries and
/// `constraint_norm` is meaningful; for full runs `flux` has 6 entries.
struct TrajectoryFrame {
    double t = 0.0;
    Vec6 omega = Vec6::Zero();
    Vec6 theta = Vec6::Zero();
    VecX flux;
    VecX flux_rate;
    double H = 0.0;
    double constraint_norm = 0.0;
    bool reduced = false;
};

struct RunConfig {
    Method method;
    double h = 1e-4;
    double t_end = 1.0;
    long stride = 1;
    std::string params_spec = "fbm-ssr";
    std::string ics_spec = "benchmark-ics";
    ModelVariant variant;
    GaussOptions gauss_options;
};

using FrameSink = std::function<void(const TrajectoryFrame&)>;
using StageSink = std::function<void(const StageRecord&, const ReducedState& before,
                                     const ReducedState& after)>;

struct RunSummary {
    long n_steps = 0;
    double max_constraint_norm = 0.0;
    double max_stage_residual = 0.0;
    int max_newton_iterations = 0;
};

/// Runs a configuration, emitting a frame at step 0, every `stride` steps
/// and at the final step.  `stage_sink`, when given on a gauss run, receives
/// the retained stage data of every step.  Deterministic: identical inputs
/// produce bit-identical frame sequences.
RunSummary integrate(const RunConfig& cfg, const FrameSink& sink,
                     const StageSink& stage_sink = nullptr);

/// Convenience wrapper collecting the frames.
std::vector<TrajectoryFrame> run_trajectory(const RunConfig& cfg, RunSummary* summary = nullptr);

// ---------------------------------------------------------------------------
// Cross-run comparison
// ---------------------------------------------------------------------------

/// Per-frame discrepancy between two runs on the shared coordinates
/// (theta_dot, theta, psi_1alpha, psi_1beta, psi_2alpha, psi_2beta, psi_f,
/// psi_q); eliminated fluxes of a reduced run are reconstructed.
struct CompareFrame {
    double t = 0.0;
    double d_omega = 0.0;
    double d_theta = 0.0;
    double d_flux = 0.0;
    double d_inf = 0.0;
};

struct CompareSummary {
    double max_d_inf = 0.0;
    double mean_d_inf = 0.0;
};

/// Runs both configurations (which must agree in h, t_end and stride) and
/// compares them frame by frame.  Throws InputError on schema mismatch.
CompareSummary compare_runs(const RunConfig& a, const RunConfig& b,
                            std::vector<CompareFrame>& frames);

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

struct ConvergenceResult {
    std::vector<double> h_list;
    // infinity-norm errors at t_end against the reference, per variable group
    std::vector<double> err_flux;       // psi_t
    std::vector<double> err_theta_dot;
    std::vector<double> err_theta;
    std::vector<double> err_flux_rate;  // psi_t_dot
    // least-squares slopes of log(err) vs log(h)
    double order_flux = 0.0;
    double order_theta_dot = 0.0;
    double order_theta = 0.0;
    double order_flux_rate = 0.0;
};

struct ConvergenceConfig {
    Method method;
    std::vector<double> h_list;
    double t_end = 0.02;
    int ref_stages = 3;
    double ref_h = 2.5e-6;
    std::string params_spec = "fbm-ssr";
    std::string ics_spec = "benchmark-ics";
    /// Start from a constraint-consistent algebraic value (the differential
    /// initial values are left untouched).
    bool consistent_start = true;
    /// Maximum number of h-grid members integrated concurrently; capped by
    /// the PHDAE_THREADS environment variable.
    int max_threads = 0; // 0 = hardware default
};

/// Errors at t_end for each h against a fine Gauss reference, and the
/// fitted observed orders.  h_list needs >= 3 distinct values, each an
/// integer number of steps to t_end; ref_h must satisfy ref_h <= min(h)/4.
ConvergenceResult convergence_study(const ConvergenceConfig& cfg);

/// Least-squares slope of log(err) vs log(h).  Used by the study; exposed
/// for tests.
double fit_order(const std::vector<double>& h, const std::vector<double>& err);

} // namespace phdae
