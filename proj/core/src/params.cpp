#include "phdae/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "phdae/errors.hpp"

namespace phdae {

Vec6 PhysicalParams::torque_vector() const {
    Vec6 t = Vec6::Zero();
    t.head<4>() = T_drive;
    return t;
}

PhysicalParams fbm_ssr_params() {
    PhysicalParams p;
    p.R = 0.5e-3;
    p.L = 0.6182e-3;
    p.U_s = 26.0e3;
    p.omega_s = 120.0 * std::numbers::pi;

    p.M = 33.35e-3;
    p.L_r = 519.0e-3;
    p.L_s = 3.0e-3;
    p.M_s = 0.516e-3;
    p.R_f = 0.1597;
    p.R_q = 0.1597;
    p.U_f = 3212.64 * p.R_f; // excitation current 3212.64 A

    p.J << 1166.56, 1953.83, 10782.84, 11103.62, 10906.22, 429.68;
    p.K_shaft << 45692300.27, 82680741.64, 123179605.30, 167728592.0, 6679980.902;
    p.T_drive << 601469.26, 521273.35, 441077.45, 441077.45;
    p.D.setZero();
    return p;
}

PhysicalParams params_preset(const std::string& name) {
    if (name == "fbm-ssr") return fbm_ssr_params();
    throw InputError("unknown parameter preset '" + name + "' (available: fbm-ssr)");
}

void validate_params(const PhysicalParams& p) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw InputError("invalid parameters: " + msg);
    };
    require(p.R > 0.0, "R must be positive");
    require(p.L > 0.0, "L must be positive");
    require(p.R_f > 0.0, "R_f must be positive");
    require(p.R_q > 0.0, "R_q must be positive");
    require(p.omega_s > 0.0, "omega_s must be positive");
    require((p.J.array() > 0.0).all(), "all inertias must be positive");
    require((p.K_shaft.array() > 0.0).all(), "all shaft stiffnesses must be positive");
    const double d_full = 1.5 * p.M * p.M - p.L_r * (p.L_s + p.M_s);
    const double d_red = 1.5 * p.M * p.M - p.L_r * (p.L_s + p.M_s + p.L);
    require(d_full != 0.0, "coupling denominator 1.5 M^2 - L_r (L_s + M_s) vanishes");
    require(d_red != 0.0, "reduction denominator 1.5 M^2 - L_r (L_s + M_s + L) vanishes");
    require((p.D - p.D.transpose()).cwiseAbs().maxCoeff() == 0.0, "D must be symmetric");
}

namespace {

struct KeyValueFile {
    // section -> key -> list of numbers
    std::map<std::string, std::map<std::string, std::vector<double>>> data;
    std::string path;

    const std::vector<double>& get(const std::string& section, const std::string& key,
                                   size_t count) const {
        auto sit = data.find(section);
        if (sit == data.end())
            throw InputError(path + ": missing section [" + section + "]");
        auto kit = sit->second.find(key);
        if (kit == sit->second.end())
            throw InputError(path + ": missing key '" + key + "' in [" + section + "]");
        if (kit->second.size() != count) {
            std::ostringstream os;
            os << path << ": key '" << key << "' needs " << count << " value(s), got "
               << kit->second.size();
            throw InputError(os.str());
        }
        return kit->second;
    }

    bool has(const std::string& section, const std::string& key) const {
        auto sit = data.find(section);
        return sit != data.end() && sit->second.count(key) > 0;
    }
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

KeyValueFile parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    KeyValueFile f;
    f.path = path;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InputError(path + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string rest = trim(line.substr(eq + 1));
        std::vector<double> values;
        std::istringstream vs(rest);
        std::string tok;
        while (vs >> tok) {
            if (!tok.empty() && tok.back() == ',') tok.pop_back();
            if (tok.empty()) continue;
            size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
            }
            if (used != tok.size())
                throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
            values.push_back(v);
        }
        if (values.empty())
            throw InputError(path + ":" + std::to_string(lineno) + ": no values for key '" + key + "'");
        f.data[section][key] = std::move(values);
    }
    return f;
}

} // namespace

PhysicalParams load_params(const std::string& path) {
    KeyValueFile f = parse_key_value_file(path);

    static const std::map<std::string, std::vector<std::string>> known = {
        {"electrical", {"R", "L", "M", "L_r", "L_s", "M_s", "R_f", "R_q"}},
        {"source", {"U_s", "omega_s", "I_f"}},
        {"mechanical", {"J", "K", "T", "D_diag"}},
    };
    for (const auto& [section, keys] : f.data) {
        auto it = known.find(section);
        if (it == known.end())
            throw InputError(path + ": unknown section [" + section + "]");
        for (const auto& [key, values] : keys) {
            (void)values;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                throw InputError(path + ": unknown key '" + key + "' in [" + section + "]");
        }
    }

    PhysicalParams p;
    p.R = f.get("electrical", "R", 1)[0];
    p.L = f.get("electrical", "L", 1)[0];
    p.M = f.get("electrical", "M", 1)[0];
    p.L_r = f.get("electrical", "L_r", 1)[0];
    p.L_s = f.get("electrical", "L_s", 1)[0];
    p.M_s = f.get("electrical", "M_s", 1)[0];
    p.R_f = f.get("electrical", "R_f", 1)[0];
    p.R_q = f.get("electrical", "R_q", 1)[0];
    p.U_s = f.get("source", "U_s", 1)[0];
    p.omega_s = f.get("source", "omega_s", 1)[0];
    p.U_f = f.get("source", "I_f", 1)[0] * p.R_f;
    const auto& J = f.get("mechanical", "J", 6);
    const auto& K = f.get("mechanical", "K", 5);
    const auto& T = f.get("mechanical", "T", 4);
    for (int i = 0; i < 6; ++i) p.J[i] = J[size_t(i)];
    for (int i = 0; i < 5; ++i) p.K_shaft[i] = K[size_t(i)];
    for (int i = 0; i < 4; ++i) p.T_drive[i] = T[size_t(i)];
    if (f.has("mechanical", "D_diag")) {
        const auto& d = f.get("mechanical", "D_diag", 6);
        for (int i = 0; i < 6; ++i) p.D(i, i) = d[size_t(i)];
    }
    validate_params(p);
    return p;
}

PhysicalParams resolve_params(const std::string& spec) {
    if (spec == "fbm-ssr") return fbm_ssr_params();
    return load_params(spec);
}

} // namespace phdae
