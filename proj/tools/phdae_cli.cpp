#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phdae/csv.hpp"
#include "phdae/gauss_identities.hpp"
#include "phdae/phdae.hpp"

namespace {

using namespace phdae;

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw InputError("bad step size '" + item + "' in h-list");
        }
        if (pos != item.size()) throw InputError("bad step size '" + item + "' in h-list");
        out.push_back(v);
    }
    if (out.empty()) throw InputError("empty h-list");
    return out;
}

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key = value file mirroring the run configuration
RunConfig read_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    RunConfig cfg;
    bool have_method = false;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        try {
            if (key == "method") {
                cfg.method = Method::parse(value);
                have_method = true;
            } else if (key == "h") {
                cfg.h = std::stod(value);
            } else if (key == "t_end") {
                cfg.t_end = std::stod(value);
            } else if (key == "stride") {
                cfg.stride = std::stol(value);
            } else if (key == "params") {
                cfg.params_spec = value;
            } else if (key == "ics") {
                cfg.ics_spec = value;
            } else {
                throw InputError(path + ":" + std::to_string(lineno) + ": unknown key '" +
                                 key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw InputError(path + ":" + std::to_string(lineno) + ": bad value '" + value +
                             "'");
        }
    }
    if (!have_method) throw InputError(path + ": missing required key 'method'");
    if (cfg.stride < 1) throw InputError(path + ": stride must be >= 1");
    return cfg;
}

std::string ledger_path(const std::string& out) {
    const std::string suffix = ".csv";
    if (out.size() > suffix.size() &&
        out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out.substr(0, out.size() - suffix.size()) + ".ledger.csv";
    return out + ".ledger.csv";
}

PowerLedgerEntry full_power_terms(const TrajectoryFrame& f, const FullModel& model) {
    FullState s;
    s.psi = f.flux;
    s.psi_dot = f.flux_rate;
    s.theta_dot = f.omega;
    s.theta = f.theta;
    s.t = f.t;
    PowerLedgerEntry e;
    e.t = s.t;
    e.H = model.energy(s);
    e.supplied = model.supplied_power(s);
    e.dissipated = model.dissipated_power(s);
    e.balance_residual = s.psi_dot.dot(model.electrical_residual(s));
    return e;
}

PowerLedgerEntry reduced_power_terms(const TrajectoryFrame& f, const ReducedModel& model) {
    ReducedState s;
    s.psi_t = f.flux;
    s.psi_t_dot = f.flux_rate;
    s.theta_dot = f.omega;
    s.theta = f.theta;
    s.t = f.t;
    return power_terms(s, model);
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_path, bool want_ledger,
                 bool want_dirac, bool want_constraint) {
    const PhysicalParams params = resolve_params(cfg.params_spec);
    const bool reduced = cfg.method.is_reduced();
    if (want_dirac && !reduced)
        throw InputError("--dirac requires a gauss method (stage data is collocation-only)");

    std::ofstream out(out_path);
    if (!out) throw InputError("cannot open output file '" + out_path + "'");
    std::ofstream ledger;
    if (want_ledger) {
        ledger.open(ledger_path(out_path));
        if (!ledger) throw InputError("cannot open ledger file");
        write_ledger_header(ledger);
    }

    FullModel full(params);
    ReducedModel red(params);

    write_trajectory_header(out, reduced);
    long frames = 0;
    FrameSink sink = [&](const TrajectoryFrame& f) {
        write_trajectory_row(out, f, params.omega_s);
        ++frames;
        if (want_ledger)
            write_ledger_row(ledger, reduced ? reduced_power_terms(f, red)
                                             : full_power_terms(f, full));
    };

    double max_dirac = 0.0;
    StageSink stage_sink;
    if (want_dirac)
        stage_sink = [&](const StageRecord& rec, const ReducedState&, const ReducedState&) {
            max_dirac = std::max(max_dirac, dirac_membership_residual(rec, red));
        };

    const RunSummary summary = integrate(cfg, sink, want_dirac ? stage_sink : StageSink{});

    std::printf("method=%s steps=%ld frames=%ld\n", cfg.method.name().c_str(),
                summary.n_steps, frames);
    if (want_constraint || reduced)
        std::printf("max_constraint_norm=%s\n",
                    format_full(summary.max_constraint_norm).c_str());
    if (reduced) {
        std::printf("max_stage_residual=%s\n", format_full(summary.max_stage_residual).c_str());
        std::printf("max_newton_iterations=%d\n", summary.max_newton_iterations);
    }
    if (want_dirac) std::printf("max_dirac_residual=%s\n", format_full(max_dirac).c_str());
    return 0;
}

int cmd_convergence(const ConvergenceConfig& cfg) {
    const ConvergenceResult res = convergence_study(cfg);
    std::printf("%-14s %-14s %-14s %-14s %-14s\n", "h", "err_flux", "err_theta_dot",
                "err_theta", "err_flux_rate");
    for (size_t i = 0; i < res.h_list.size(); ++i)
        std::printf("%-14.6e %-14.6e %-14.6e %-14.6e %-14.6e\n", res.h_list[i],
                    res.err_flux[i], res.err_theta_dot[i], res.err_theta[i],
                    res.err_flux_rate[i]);
    std::printf("%-14s %-14.3f %-14.3f %-14.3f %-14.3f\n", "order", res.order_flux,
                res.order_theta_dot, res.order_theta, res.order_flux_rate);
    return 0;
}

int cmd_compare(const std::string& cfg_a, const std::string& cfg_b,
                const std::string& out_path) {
    const RunConfig a = read_run_config(cfg_a);
    const RunConfig b = read_run_config(cfg_b);
    std::vector<CompareFrame> frames;
    const CompareSummary summary = compare_runs(a, b, frames);

    std::ofstream out(out_path);
    if (!out) throw InputError("cannot open output file '" + out_path + "'");
    write_compare_header(out);
    for (const auto& f : frames) write_compare_row(out, f);

    std::printf("frames=%zu max_d_inf=%s mean_d_inf=%s\n", frames.size(),
                format_full(summary.max_d_inf).c_str(),
                format_full(summary.mean_d_inf).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synchronous generator benchmark: predictor-corrector and Gauss "
                 "collocation integrators"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate and write a trajectory CSV");
    std::string sim_method = "gauss:1", sim_ics = "benchmark-ics", sim_params = "fbm-ssr";
    std::string sim_out;
    double sim_h = 1e-4, sim_tend = 1.0;
    long sim_stride = 1;
    bool sim_ledger = false, sim_long = false, sim_dirac = false, sim_constraint = false;
    // --h is the step size here, so help keeps only its long form
    sim->set_help_flag("--help", "print help");
    sim->add_option("--method", sim_method, "pc1, pc2 or gauss:S");
    sim->add_option("--h", sim_h, "step size [s]")->required();
    sim->add_option("--t-end", sim_tend, "final time [s]")->required();
    sim->add_option("--stride", sim_stride, "emit every Nth frame");
    sim->add_option("--ics", sim_ics, "benchmark-ics or state file path");
    sim->add_option("--params", sim_params, "fbm-ssr or parameter file path");
    sim->add_option("--out", sim_out, "trajectory CSV path")->required();
    sim->add_flag("--ledger", sim_ledger, "also write a power ledger CSV");
    sim->add_flag("--dirac", sim_dirac, "report max Dirac kernel residual (gauss only)");
    sim->add_flag("--constraint", sim_constraint, "report max constraint norm");
    sim->add_flag("--long", sim_long, "allow t-end > 10 s (hour-scale runs)");

    // convergence
    auto* conv = app.add_subcommand("convergence", "observed-order study against a "
                                                   "fine Gauss reference");
    std::string conv_method = "gauss:1", conv_hlist, conv_ics = "benchmark-ics",
                conv_params = "fbm-ssr";
    double conv_tend = 0.02, conv_refh = 2.5e-6;
    int conv_refstages = 3;
    conv->add_option("--method", conv_method, "pc1, pc2 or gauss:S");
    conv->add_option("--h-list", conv_hlist, "comma-separated step sizes")->required();
    conv->add_option("--t-end", conv_tend, "horizon [s]");
    conv->add_option("--ref-stages", conv_refstages, "reference Gauss stage count");
    conv->add_option("--ref-h", conv_refh, "reference step size [s]");
    conv->add_option("--ics", conv_ics, "benchmark-ics or state file path");
    conv->add_option("--params", conv_params, "fbm-ssr or parameter file path");

    // compare
    auto* cmp = app.add_subcommand("compare", "discrepancy series of two runs");
    std::string cmp_a, cmp_b, cmp_out;
    cmp->add_option("--a", cmp_a, "config file for run A")->required();
    cmp->add_option("--b", cmp_b, "config file for run B")->required();
    cmp->add_option("--out", cmp_out, "comparison CSV path")->required();

    // tableau
    auto* tab = app.add_subcommand("tableau", "print a Gauss Butcher tableau");
    int tab_stages = 1;
    tab->add_option("--stages", tab_stages, "stage count")->required();

    // verify-appendix
    auto* ver = app.add_subcommand("verify-appendix", "check the Gauss-method "
                                                      "algebraic identities");
    int ver_stages = 6;
    ver->add_option("--max-stages", ver_stages, "largest stage count to check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed()) {
            if (sim_tend > 10.0 && !sim_long)
                throw phdae::InputError(
                    "t-end > 10 s is an hour-scale run; pass --long to confirm");
            phdae::RunConfig cfg;
            cfg.method = phdae::Method::parse(sim_method);
            cfg.h = sim_h;
            cfg.t_end = sim_tend;
            cfg.stride = sim_stride;
            cfg.params_spec = sim_params;
            cfg.ics_spec = sim_ics;
            return cmd_simulate(cfg, sim_out, sim_ledger, sim_dirac, sim_constraint);
        }
        if (conv->parsed()) {
            phdae::ConvergenceConfig cfg;
            cfg.method = phdae::Method::parse(conv_method);
            cfg.h_list = parse_h_list(conv_hlist);
            cfg.t_end = conv_tend;
            cfg.ref_stages = conv_refstages;
            cfg.ref_h = conv_refh;
            cfg.params_spec = conv_params;
            cfg.ics_spec = conv_ics;
            return cmd_convergence(cfg);
        }
        if (cmp->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_out);
        if (tab->parsed()) {
            std::fputs(phdae::gauss_tableau(tab_stages).format().c_str(), stdout);
            return 0;
        }
        if (ver->parsed()) {
            const auto reports = phdae::verify_gauss_identities(ver_stages);
            std::fputs(phdae::format_identity_reports(reports).c_str(), stdout);
            for (const auto& r : reports)
                if (!r.passed) return 1;
            return 0;
        }
    } catch (const phdae::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
