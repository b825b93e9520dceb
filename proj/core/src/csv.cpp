#include "phdae/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "phdae/errors.hpp"

namespace phdae {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_header(std::ostream& os, bool reduced) {
    os << "t";
    for (int i = 1; i <= 6; ++i) os << ",omega_" << i;
    for (int i = 1; i <= 6; ++i) os << ",omega_err_" << i;
    for (int i = 1; i <= 6; ++i) os << ",theta_" << i;
    if (reduced) {
        for (int i = 1; i <= 4; ++i) os << ",psi_t_" << i;
        os << ",H,constraint_norm";
    } else {
        for (int i = 1; i <= 6; ++i) os << ",psi_" << i;
        os << ",H";
    }
    os << "\n";
}

void write_trajectory_row(std::ostream& os, const TrajectoryFrame& f, double omega_s) {
    os << format_full(f.t);
    for (int i = 0; i < 6; ++i) os << ',' << format_full(f.omega[i]);
    for (int i = 0; i < 6; ++i) os << ',' << format_full(f.omega[i] - omega_s);
    // raw angles, never wrapped: theta differences carry the shaft energy
    for (int i = 0; i < 6; ++i) os << ',' << format_full(f.theta[i]);
    for (long i = 0; i < f.flux.size(); ++i) os << ',' << format_full(f.flux[i]);
    os << ',' << format_full(f.H);
    if (f.reduced) os << ',' << format_full(f.constraint_norm);
    os << "\n";
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p || *end != '\0') throw InputError("bad numeric field '" + s + "'");
    return v;
}

} // namespace

std::vector<TrajectoryFrame> read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InputError("empty trajectory file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);
    bool reduced;
    if (header.size() == 25 && header[19] == "psi_t_1" && header.back() == "constraint_norm")
        reduced = true;
    else if (header.size() == 26 && header[19] == "psi_1" && header.back() == "H")
        reduced = false;
    else
        throw InputError("unrecognized trajectory header");

    std::vector<TrajectoryFrame> frames;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size())
            throw InputError("row " + std::to_string(lineno) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        TrajectoryFrame f;
        f.reduced = reduced;
        f.t = parse_double(fields[0]);
        for (int i = 0; i < 6; ++i) f.omega[i] = parse_double(fields[size_t(1 + i)]);
        // columns 7..12 hold omega_err, recomputable from omega; skip them
        for (int i = 0; i < 6; ++i) f.theta[i] = parse_double(fields[size_t(13 + i)]);
        const int nflux = reduced ? 4 : 6;
        f.flux.resize(nflux);
        for (int i = 0; i < nflux; ++i) f.flux[i] = parse_double(fields[size_t(19 + i)]);
        f.H = parse_double(fields[size_t(19 + nflux)]);
        if (reduced) f.constraint_norm = parse_double(fields[24]);
        f.flux_rate.resize(0);
        frames.push_back(f);
    }
    return frames;
}

void write_ledger_header(std::ostream& os) {
    os << "t,H,supplied,dissipated,balance_residual\n";
}

void write_ledger_row(std::ostream& os, const PowerLedgerEntry& e) {
    os << format_full(e.t) << ',' << format_full(e.H) << ',' << format_full(e.supplied)
       << ',' << format_full(e.dissipated) << ',' << format_full(e.balance_residual)
       << "\n";
}

void write_compare_header(std::ostream& os) {
    os << "t,d_omega,d_theta,d_flux,d_inf\n";
}

void write_compare_row(std::ostream& os, const CompareFrame& f) {
    os << format_full(f.t) << ',' << format_full(f.d_omega) << ',' << format_full(f.d_theta)
       << ',' << format_full(f.d_flux) << ',' << format_full(f.d_inf) << "\n";
}

} // namespace phdae
