#pragma once

#include <string>
#include <variant>

#include "phdae/model.hpp"
#include "phdae/states.hpp"

namespace phdae {

/// Benchmark steady-state initial values ("benchmark-ics" in the CLI).
FullState benchmark_initial_full();
ReducedState benchmark_initial_reduced();

/// Either flavor of state, as loaded from a file or preset.
using AnyState = std::variant<FullState, ReducedState>;

/// Loads an initial state from a key-value text file.  Files with
/// psi_dot/psi keys (6 entries each) describe a full state, files with
/// psi_t_dot/psi_t keys (4 entries) a reduced one.  theta_dot/theta are
/// required in both.  An optional `t` key sets the initial time.
AnyState load_initial_state(const std::string& path);

/// Resolves a CLI-style `--ics` value: the builtin name or a path.
AnyState resolve_initial_state(const std::string& spec);

/// Coerce to the flavor a method needs.  Reduced -> full uses the
/// reconstruction relation; full -> reduced just drops the eliminated rows.
FullState as_full(const AnyState& s, const PhysicalParams& p);
ReducedState as_reduced(const AnyState& s);

/// Replaces psi_t_dot by the value consistent with the algebraic constraint.
ReducedState project_consistent(const ReducedState& s, const ReducedModel& model);

} // namespace phdae
