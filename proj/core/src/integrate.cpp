#include "phdae/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>
#include <thread>

#include "phdae/errors.hpp"

namespace phdae {

Method Method::parse(const std::string& text) {
    Method m;
    if (text == "pc1") { m.kind = Kind::PC1; return m; }
    if (text == "pc2") { m.kind = Kind::PC2; return m; }
    if (text.rfind("gauss:", 0) == 0) {
        m.kind = Kind::Gauss;
        try {
            m.stages = std::stoi(text.substr(6));
        } catch (const std::exception&) {
            throw InputError("bad method '" + text + "'");
        }
        if (m.stages < 1 || m.stages > 12)
            throw InputError("gauss stage count must be in [1, 12]");
        return m;
    }
    throw InputError("unknown method '" + text + "' (expected pc1, pc2 or gauss:S)");
}

std::string Method::name() const {
    switch (kind) {
        case Kind::PC1: return "pc1";
        case Kind::PC2: return "pc2";
        case Kind::Gauss: return "gauss:" + std::to_string(stages);
    }
    return "?";
}

namespace {

long checked_step_count(double t_end, double h) {
    if (!(h > 0.0)) throw InputError("step size must be positive");
    if (!(t_end > 0.0)) throw InputError("t_end must be positive");
    const double raw = t_end / h;
    const long n = std::lround(raw);
    if (n < 1 || std::abs(raw - double(n)) > 1e-8 * std::max(1.0, raw)) {
        std::ostringstream os;
        os << "t_end = " << t_end << " is not an integer number of steps of h = " << h;
        throw InputError(os.str());
    }
    return n;
}

TrajectoryFrame reduced_frame(const ReducedState& s, const ReducedModel& model) {
    TrajectoryFrame f;
    f.t = s.t;
    f.omega = s.theta_dot;
    f.theta = s.theta;
    f.flux = s.psi_t;
    f.flux_rate = s.psi_t_dot;
    f.H = model.hamiltonian(s);
    f.constraint_norm =
        model.constraint(s.t, s.differential(), s.psi_t_dot).lpNorm<Eigen::Infinity>();
    f.reduced = true;
    return f;
}

TrajectoryFrame full_frame(const FullState& s, const FullModel& model) {
    TrajectoryFrame f;
    f.t = s.t;
    f.omega = s.theta_dot;
    f.theta = s.theta;
    f.flux = s.psi;
    f.flux_rate = s.psi_dot;
    f.H = model.energy(s);
    f.constraint_norm = model.consistency_residual(s).lpNorm<Eigen::Infinity>();
    f.reduced = false;
    return f;
}

} // namespace

RunSummary integrate(const RunConfig& cfg, const FrameSink& sink, const StageSink& stage_sink) {
    const PhysicalParams params = resolve_params(cfg.params_spec);
    const AnyState ics = resolve_initial_state(cfg.ics_spec);
    const long n_steps = checked_step_count(cfg.t_end, cfg.h);
    const long stride = std::max<long>(1, cfg.stride);

    RunSummary summary;
    summary.n_steps = n_steps;

    auto want_frame = [&](long i) { return i % stride == 0 || i == n_steps; };

    if (cfg.method.is_reduced()) {
        ReducedModel model(params, cfg.variant);
        ReducedState state = as_reduced(ics);
        GaussDaeStepper stepper(model, gauss_tableau(cfg.method.stages), cfg.gauss_options);

        if (sink && want_frame(0)) sink(reduced_frame(state, model));
        GaussStepReport report;
        StageRecord record;
        for (long i = 1; i <= n_steps; ++i) {
            const ReducedState before = state;
            state = stepper.step(before, cfg.h, &report, stage_sink ? &record : nullptr);
            summary.max_stage_residual = std::max(summary.max_stage_residual,
                                                  report.stage_residual);
            summary.max_newton_iterations = std::max(summary.max_newton_iterations,
                                                     report.newton_iterations);
            // the endpoint defect, not the stage defect (which vanishes by
            // construction of the eliminated stage values)
            summary.max_constraint_norm = std::max(summary.max_constraint_norm,
                double(model.constraint(state.t, state.differential(), state.psi_t_dot)
                           .lpNorm<Eigen::Infinity>()));
            if (stage_sink) stage_sink(record, before, state);
            if (sink && want_frame(i)) sink(reduced_frame(state, model));
        }
    } else {
        FullModel model(params, cfg.variant);
        FullState state = as_full(ics, params);
        PCWorkspace ws(model, cfg.h);

        if (sink && want_frame(0)) sink(full_frame(state, model));
        for (long i = 1; i <= n_steps; ++i) {
            state = cfg.method.kind == Method::Kind::PC1 ? ws.pc1_step(state)
                                                          : ws.pc2_step(state);
            if (!state.electrical().allFinite() || !state.mechanical().allFinite())
                throw Error("non-finite state at step " + std::to_string(i));
            summary.max_constraint_norm = std::max(summary.max_constraint_norm,
                double(model.consistency_residual(state).lpNorm<Eigen::Infinity>()));
            if (sink && want_frame(i)) sink(full_frame(state, model));
        }
    }
    return summary;
}

std::vector<TrajectoryFrame> run_trajectory(const RunConfig& cfg, RunSummary* summary) {
    std::vector<TrajectoryFrame> frames;
    RunSummary s = integrate(cfg, [&](const TrajectoryFrame& f) { frames.push_back(f); });
    if (summary) *summary = s;
    return frames;
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

namespace {

// Shared coordinates: theta_dot, theta, then the six fluxes in full-model
// order; eliminated fluxes of a reduced frame come from the reconstruction.
void shared_coordinates(const TrajectoryFrame& f, const ReducedModel& model,
                        Vec6& omega, Vec6& theta, Vec6& flux) {
    omega = f.omega;
    theta = f.theta;
    if (f.reduced) {
        const Vec4 psi_t = f.flux;
        const Vec2 psi2 = model.reconstruct_eliminated_flux(psi_t, f.theta[4]);
        flux << psi_t[0], psi_t[1], psi2[0], psi2[1], psi_t[2], psi_t[3];
    } else {
        flux = f.flux;
    }
}

} // namespace

CompareSummary compare_runs(const RunConfig& a, const RunConfig& b,
                            std::vector<CompareFrame>& frames) {
    if (a.h != b.h || a.t_end != b.t_end || a.stride != b.stride)
        throw InputError("compare_runs: configurations disagree in h, t_end or stride");
    if (a.params_spec != b.params_spec)
        throw InputError("compare_runs: configurations use different parameter sets");
    if (a.ics_spec != b.ics_spec)
        throw InputError("compare_runs: configurations use different initial states");

    const auto fa = run_trajectory(a);
    const auto fb = run_trajectory(b);
    if (fa.size() != fb.size())
        throw Error("compare_runs: trajectories have different frame counts");

    const PhysicalParams params = resolve_params(a.params_spec);
    ReducedModel model(params);

    frames.clear();
    frames.reserve(fa.size());
    CompareSummary summary;
    double sum = 0.0;
    for (size_t i = 0; i < fa.size(); ++i) {
        Vec6 oa, ta, pa, ob, tb, pb;
        shared_coordinates(fa[i], model, oa, ta, pa);
        shared_coordinates(fb[i], model, ob, tb, pb);
        CompareFrame cf;
        cf.t = fa[i].t;
        cf.d_omega = (oa - ob).lpNorm<Eigen::Infinity>();
        cf.d_theta = (ta - tb).lpNorm<Eigen::Infinity>();
        cf.d_flux = (pa - pb).lpNorm<Eigen::Infinity>();
        cf.d_inf = std::max({cf.d_omega, cf.d_theta, cf.d_flux});
        summary.max_d_inf = std::max(summary.max_d_inf, cf.d_inf);
        sum += cf.d_inf;
        frames.push_back(cf);
    }
    summary.mean_d_inf = frames.empty() ? 0.0 : sum / double(frames.size());
    return summary;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2)
        throw InputError("fit_order: need matching lists with >= 2 entries");
    const size_t n = h.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(h[i] > 0.0)) throw InputError("fit_order: nonpositive h");
        if (!(err[i] > 0.0)) throw InputError("fit_order: nonpositive error value");
        x[i] = std::log(h[i]);
        y[i] = std::log(err[i]);
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InputError("fit_order: degenerate h list");
    return sxy / sxx;
}

namespace {

int thread_cap(int requested) {
    int cap = requested > 0 ? requested : int(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("PHDAE_THREADS")) {
        try {
            const int limit = std::stoi(env);
            if (limit >= 1) cap = std::min(cap, limit);
        } catch (const std::exception&) {
            throw InputError("PHDAE_THREADS must be a positive integer");
        }
    }
    return cap;
}

struct EndpointError {
    double flux, theta_dot, theta, flux_rate;
};

EndpointError endpoint_error_reduced(const ReducedState& s, const ReducedState& ref) {
    return {(s.psi_t - ref.psi_t).lpNorm<Eigen::Infinity>(),
            (s.theta_dot - ref.theta_dot).lpNorm<Eigen::Infinity>(),
            (s.theta - ref.theta).lpNorm<Eigen::Infinity>(),
            (s.psi_t_dot - ref.psi_t_dot).lpNorm<Eigen::Infinity>()};
}

EndpointError endpoint_error_full(const FullState& s, const ReducedState& ref) {
    const Vec4 flux(s.psi[0], s.psi[1], s.psi[4], s.psi[5]);
    const Vec4 rate(s.psi_dot[0], s.psi_dot[1], s.psi_dot[4], s.psi_dot[5]);
    return {(flux - ref.psi_t).lpNorm<Eigen::Infinity>(),
            (s.theta_dot - ref.theta_dot).lpNorm<Eigen::Infinity>(),
            (s.theta - ref.theta).lpNorm<Eigen::Infinity>(),
            (rate - ref.psi_t_dot).lpNorm<Eigen::Infinity>()};
}

} // namespace

ConvergenceResult convergence_study(const ConvergenceConfig& cfg) {
    if (cfg.h_list.size() < 3)
        throw InputError("convergence_study: need at least 3 step sizes");
    std::vector<double> sorted = cfg.h_list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("convergence_study: step sizes must be distinct");
    const double h_min = sorted.front();
    if (!(cfg.ref_h > 0.0) || cfg.ref_h > h_min / 4.0 * (1.0 + 1e-12))
        throw InputError("convergence_study: reference step must satisfy ref_h <= min(h)/4");
    for (double h : cfg.h_list) checked_step_count(cfg.t_end, h);
    checked_step_count(cfg.t_end, cfg.ref_h);

    const PhysicalParams params = resolve_params(cfg.params_spec);
    const AnyState ics = resolve_initial_state(cfg.ics_spec);
    ReducedModel model(params);

    ReducedState r0 = as_reduced(ics);
    if (cfg.consistent_start) r0 = project_consistent(r0, model);

    // reference trajectory endpoint
    ReducedState ref = r0;
    {
        GaussDaeStepper stepper(model, gauss_tableau(cfg.ref_stages));
        const long n = checked_step_count(cfg.t_end, cfg.ref_h);
        for (long i = 0; i < n; ++i) ref = stepper.step(ref, cfg.ref_h);
    }

    const bool reduced_method = cfg.method.is_reduced();
    FullState f0;
    if (!reduced_method) {
        f0 = as_full(ics, params);
        if (cfg.consistent_start) {
            // match the projected reduced start on the shared coordinates
            const FullState fproj = expand_state(r0, params);
            f0 = fproj;
        }
    }

    auto run_one = [&](double h) -> EndpointError {
        if (reduced_method) {
            ReducedModel local(params);
            GaussDaeStepper stepper(local, gauss_tableau(cfg.method.stages));
            ReducedState s = r0;
            const long n = checked_step_count(cfg.t_end, h);
            for (long i = 0; i < n; ++i) s = stepper.step(s, h);
            return endpoint_error_reduced(s, ref);
        }
        FullModel local(params);
        PCWorkspace ws(local, h);
        FullState s = f0;
        const long n = checked_step_count(cfg.t_end, h);
        for (long i = 0; i < n; ++i)
            s = cfg.method.kind == Method::Kind::PC1 ? ws.pc1_step(s) : ws.pc2_step(s);
        return endpoint_error_full(s, ref);
    };

    const size_t m = cfg.h_list.size();
    std::vector<EndpointError> errors(m);
    const int cap = thread_cap(cfg.max_threads);
    if (cap <= 1 || m <= 1) {
        for (size_t i = 0; i < m; ++i) errors[i] = run_one(cfg.h_list[i]);
    } else {
        for (size_t base = 0; base < m; base += size_t(cap)) {
            const size_t end = std::min(m, base + size_t(cap));
            std::vector<std::future<EndpointError>> futs;
            for (size_t i = base; i < end; ++i)
                futs.push_back(std::async(std::launch::async, run_one, cfg.h_list[i]));
            for (size_t i = base; i < end; ++i) errors[i] = futs[i - base].get();
        }
    }

    ConvergenceResult res;
    res.h_list = cfg.h_list;
    for (const auto& e : errors) {
        res.err_flux.push_back(e.flux);
        res.err_theta_dot.push_back(e.theta_dot);
        res.err_theta.push_back(e.theta);
        res.err_flux_rate.push_back(e.flux_rate);
    }
    res.order_flux = fit_order(cfg.h_list, res.err_flux);
    res.order_theta_dot = fit_order(cfg.h_list, res.err_theta_dot);
    res.order_theta = fit_order(cfg.h_list, res.err_theta);
    res.order_flux_rate = fit_order(cfg.h_list, res.err_flux_rate);
    return res;
}

} // namespace phdae
