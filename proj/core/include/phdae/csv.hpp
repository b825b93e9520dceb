#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phdae/diagnostics.hpp"
#include "phdae/integrate.hpp"

namespace phdae {

/// Formats a double with 17 significant digits (lossless round-trip).
std::string format_full(double v);

/// Trajectory CSV.  Fixed column order; reduced runs carry four flux
/// columns plus the constraint norm, full runs six flux columns.
///   reduced: t,omega_1..6,omega_err_1..6,psi_t_1..4,H,constraint_norm
///   full:    t,omega_1..6,omega_err_1..6,psi_1..6,H
/// omega_err is omega - omega_s componentwise.
void write_trajectory_header(std::ostream& os, bool reduced);
void write_trajectory_row(std::ostream& os, const TrajectoryFrame& f, double omega_s);

/// Reads back a trajectory CSV produced by the writer.  Only the columns
/// present in the file are populated.
std::vector<TrajectoryFrame> read_trajectory_csv(std::istream& is);

/// Power ledger CSV: t,H,supplied,dissipated,balance_residual.
void write_ledger_header(std::ostream& os);
void write_ledger_row(std::ostream& os, const PowerLedgerEntry& e);

/// Comparison CSV: t,d_omega,d_theta,d_flux,d_inf.
void write_compare_header(std::ostream& os);
void write_compare_row(std::ostream& os, const CompareFrame& f);

} // namespace phdae
