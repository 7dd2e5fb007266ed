#pragma once

#include <optional>

#include "svcsched/graph.hpp"
#include "svcsched/solve.hpp"

namespace svc {

/// Exact pseudo-polynomial DP for fully parallel graphs. Any epsilon in the
/// query is ignored. Throws ShapeMismatch for other shapes.
std::optional<SolveOutcome> dp_parallel(const TaskGraph& g, const SolveQuery& q);

/// Exact pseudo-polynomial DP for chains. Throws ShapeMismatch for other shapes.
std::optional<SolveOutcome> dp_chain(const TaskGraph& g, const SolveQuery& q);

/// Scaled versions of the two DPs (q.epsilon required). MinCost: cost at most
/// the optimum for the deadline, makespan at most (1+eps) times the deadline.
/// MinMakespan: cost within budget, makespan at most (1+eps) times optimal.
std::optional<SolveOutcome> fptas_chain_parallel(const TaskGraph& g, const SolveQuery& q);

}  // namespace svc
