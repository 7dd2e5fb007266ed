#pragma once

#include <optional>

#include "svcsched/graph.hpp"
#include "svcsched/solve.hpp"

namespace svc {

/// True when every middle job has p_s = p_c = 1 and every delay is 1.
bool is_unit_instance(const TaskGraph& g);
/// True when every delay is 0 and every middle job has p_s = p_c (finite).
bool is_nodelay_identical(const TaskGraph& g);
/// is_nodelay_identical with all middle sizes 1.
bool is_nodelay_unit(const TaskGraph& g);

/// Unit sizes and delays with deadline augmentation: makespan at most
/// floor((1+eps) * deadline), cost within (1+eps)/(2 eps) of the optimum for
/// the deadline itself. Nothing when some chain is longer than the deadline.
/// Throws ShapeMismatch on non-unit instances.
std::optional<SolveOutcome> unit_schedule(const TaskGraph& g, Time deadline, Ratio eps);

/// No delays, identical machines: longest chain on the server, then move the
/// latest cloud jobs onto the server until the budget holds. Makespan is at
/// most twice optimal. Throws ShapeMismatch.
SolveOutcome nodelay_identical_makespan(const TaskGraph& g, Cost budget);

/// The same procedure on unit sizes, exact for either objective. Throws
/// ShapeMismatch.
std::optional<SolveOutcome> nodelay_unit_exact(const TaskGraph& g, const SolveQuery& q);

}  // namespace svc
