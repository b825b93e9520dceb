#pragma once

#include <string>

#include "phdae/types.hpp"

namespace phdae {

/// Physical parameters of the single-machine benchmark generator in SI
/// units.  Electrical quantities are ohms / henries / volts, mechanical
/// ones kg m^2 (inertia), N m / rad (shaft stiffness) and N m (applied
/// torques).  All file loaders convert to these base units immediately;
/// nothing downstream ever sees scaled quantities.
struct PhysicalParams {
    // stator circuit and network interface
    double R = 0.0;    ///< armature branch resistance [ohm]
    double L = 0.0;    ///< armature branch inductance [H]
    double U_s = 0.0;  ///< grid voltage amplitude [V]
    double omega_s = 0.0; ///< synchronous angular frequency [rad/s]

    // machine windings
    double M = 0.0;    ///< stator/rotor mutual inductance [H]
    double L_r = 0.0;  ///< rotor winding self inductance [H]
    double L_s = 0.0;  ///< stator leakage inductance [H]
    double M_s = 0.0;  ///< stator mutual leakage inductance [H]
    double R_f = 0.0;  ///< field winding resistance [ohm]
    double R_q = 0.0;  ///< damper winding resistance [ohm]
    double U_f = 0.0;  ///< field excitation voltage [V]

    // shaft train: six lumped masses, five couplings, four driven masses
    Vec6 J = Vec6::Zero();          ///< rotor inertias
    Eigen::Matrix<double, 5, 1> K_shaft = Eigen::Matrix<double, 5, 1>::Zero();
    Eigen::Matrix<double, 4, 1> T_drive = Eigen::Matrix<double, 4, 1>::Zero();
    Mat6 D = Mat6::Zero();          ///< friction matrix, zero by default

    /// Applied torque as a 6-vector (turbine stages on masses 1..4).
    Vec6 torque_vector() const;
};

/// Benchmark parameter preset ("fbm-ssr").  The field voltage is derived
/// from the stated excitation current, U_f = I_f * R_f with I_f = 3212.64 A.
PhysicalParams fbm_ssr_params();

/// Returns the preset named `name`; throws InputError for unknown names.
PhysicalParams params_preset(const std::string& name);

/// Loads parameters from a key-value text file with [electrical],
/// [mechanical] and [source] sections.  See README for the schema.
PhysicalParams load_params(const std::string& path);

/// Resolves a CLI-style parameter source: a preset name if one matches,
/// otherwise a file path.
PhysicalParams resolve_params(const std::string& spec);

/// Basic sanity checks (positive resistances/inertias, nonzero reduction
/// denominators, symmetric D).  Throws InputError on violation.
void validate_params(const PhysicalParams& p);

} // namespace phdae
