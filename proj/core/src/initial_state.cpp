#include "phdae/initial_state.hpp"

#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "phdae/errors.hpp"

namespace phdae {

FullState benchmark_initial_full() {
    FullState s;
    s.psi_dot << 26014.5269, 1.9571, 25102.2884, 6773.1172, 0.0, 0.0;
    s.psi << 0.0052, -69.0057, 17.9663, -66.5859, 645.4103, -624.0651;
    s.theta_dot.setConstant(120.0 * std::numbers::pi);
    s.theta << -0.3629, -0.3761, -0.3897, -0.4024, -0.4143, -0.4143;
    s.t = 0.0;
    return s;
}

ReducedState benchmark_initial_reduced() {
    ReducedState s;
    s.psi_t_dot << 26014.5269, 1.9571, 0.0, 0.0;
    s.psi_t << 0.0052, -69.0057, 645.4103, -624.0651;
    s.theta_dot.setConstant(120.0 * std::numbers::pi);
    s.theta << -0.3629, -0.3761, -0.3897, -0.4024, -0.4143, -0.4143;
    s.t = 0.0;
    return s;
}

namespace {

std::map<std::string, std::vector<double>> parse_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::map<std::string, std::vector<double>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string eq;
        if (!(ls >> eq) || eq != "=")
            throw InputError(path + ":" + std::to_string(lineno) + ": expected 'key = values'");
        std::vector<double> values;
        double v;
        while (ls >> v) values.push_back(v);
        if (values.empty())
            throw InputError(path + ":" + std::to_string(lineno) + ": no values for '" + key + "'");
        kv[key] = std::move(values);
    }
    return kv;
}

std::vector<double> need(const std::map<std::string, std::vector<double>>& kv,
                         const std::string& path, const std::string& key, size_t n) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw InputError(path + ": missing key '" + key + "'");
    if (it->second.size() != n)
        throw InputError(path + ": key '" + key + "' needs " + std::to_string(n) + " values");
    return it->second;
}

} // namespace

AnyState load_initial_state(const std::string& path) {
    auto kv = parse_state_file(path);
    const bool full = kv.count("psi") > 0 || kv.count("psi_dot") > 0;
    const bool reduced = kv.count("psi_t") > 0 || kv.count("psi_t_dot") > 0;
    if (full && reduced)
        throw InputError(path + ": mixes full (psi) and reduced (psi_t) keys");
    if (!full && !reduced)
        throw InputError(path + ": needs either psi/psi_dot or psi_t/psi_t_dot");

    const double t0 = kv.count("t") ? need(kv, path, "t", 1)[0] : 0.0;
    const auto td = need(kv, path, "theta_dot", 6);
    const auto th = need(kv, path, "theta", 6);

    if (full) {
        FullState s;
        const auto pd = need(kv, path, "psi_dot", 6);
        const auto ps = need(kv, path, "psi", 6);
        for (int i = 0; i < 6; ++i) {
            s.psi_dot[i] = pd[size_t(i)];
            s.psi[i] = ps[size_t(i)];
            s.theta_dot[i] = td[size_t(i)];
            s.theta[i] = th[size_t(i)];
        }
        s.t = t0;
        return s;
    }
    ReducedState s;
    const auto pd = need(kv, path, "psi_t_dot", 4);
    const auto ps = need(kv, path, "psi_t", 4);
    for (int i = 0; i < 4; ++i) {
        s.psi_t_dot[i] = pd[size_t(i)];
        s.psi_t[i] = ps[size_t(i)];
    }
    for (int i = 0; i < 6; ++i) {
        s.theta_dot[i] = td[size_t(i)];
        s.theta[i] = th[size_t(i)];
    }
    s.t = t0;
    return s;
}

AnyState resolve_initial_state(const std::string& spec) {
    if (spec == "benchmark-ics") return benchmark_initial_full();
    return load_initial_state(spec);
}

FullState as_full(const AnyState& s, const PhysicalParams& p) {
    if (std::holds_alternative<FullState>(s)) return std::get<FullState>(s);
    return expand_state(std::get<ReducedState>(s), p);
}

ReducedState as_reduced(const AnyState& s) {
    if (std::holds_alternative<ReducedState>(s)) return std::get<ReducedState>(s);
    return reduce_state(std::get<FullState>(s));
}

ReducedState project_consistent(const ReducedState& s, const ReducedModel& model) {
    ReducedState out = s;
    out.psi_t_dot = model.consistent_flux_rate(s.t, s.differential());
    return out;
}

} // namespace phdae
