#pragma once

#include "phdae/types.hpp"

namespace phdae {

/// State of the unreduced model.  Flux linkage order:
/// (psi_1alpha, psi_1beta, psi_2alpha, psi_2beta, psi_f, psi_q).
struct FullState {
    Vec6 psi_dot = Vec6::Zero();
    Vec6 psi = Vec6::Zero();
    Vec6 theta_dot = Vec6::Zero();
    Vec6 theta = Vec6::Zero();
    double t = 0.0;

    /// Electrical unknown block x_E = (psi_dot; psi).
    Vec12 electrical() const;
    /// Mechanical unknown block x_M = (theta_dot; theta).
    Vec12 mechanical() const;
    void set_electrical(const Vec12& xe);
    void set_mechanical(const Vec12& xm);
};

/// State of the reduced model after elimination of (psi_2alpha, psi_2beta).
/// Flux linkage order: (psi_1alpha, psi_1beta, psi_f, psi_q).
struct ReducedState {
    Vec4 psi_t_dot = Vec4::Zero();
    Vec4 psi_t = Vec4::Zero();
    Vec6 theta_dot = Vec6::Zero();
    Vec6 theta = Vec6::Zero();
    double t = 0.0;

    /// Differential unknowns of the semi-explicit form, (psi_t; theta_dot; theta).
    Vec16 differential() const;
    void set_differential(const Vec16& x);
};

/// Drops the eliminated fluxes (and their rates) from a full state.
ReducedState reduce_state(const FullState& s);

} // namespace phdae
