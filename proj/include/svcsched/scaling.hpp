#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "svcsched/graph.hpp"

namespace svc {

/// eps * bound / (k * n), or exactly 1 when that would not exceed 1.
Ratio scale_factor(Ratio eps, Time bound, std::size_t n, std::int64_t k = 2);

/// Same graph with every finite size and delay replaced by floor(x / rho).
TaskGraph scale_graph(const TaskGraph& g, Ratio rho);

/// ceil(d / rho)
Time scale_up_deadline(Time d, Ratio rho);

/// Solver used inside the budget-mode halving search. It receives the scaled
/// graph, the factor, and the scaled deadline (none means "unbounded, run
/// exactly"), and returns a schedule of the original graph with cost within
/// the budget, or nothing.
using ScaledRun = std::function<std::optional<Schedule>(const TaskGraph& scaled, Ratio rho, std::optional<Time> deadline)>;

/// Budget-mode search: start from the all-server makespan as deadline
/// estimate, keep the scaled deadline fixed at ceil(4n/eps) and halve the
/// scale factor each round; stop at the first failure or once no scaling is
/// left. Returns the best schedule found.
std::optional<Schedule> halving_search(const TaskGraph& g, Ratio eps, const ScaledRun& run);

}  // namespace svc
