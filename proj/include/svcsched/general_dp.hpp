#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svcsched/graph.hpp"
#include "svcsched/oracle.hpp"
#include "svcsched/solve.hpp"

namespace svc {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

struct DynProgResult {
    Cost cost = 0;
    Schedule schedule;
    std::size_t peak_states = 0;  // largest state list seen in one time step
};

/// Exact minimum cost over schedules with makespan <= deadline. States are
/// (processed set, server idle age, location and age of every processed job
/// with an unprocessed successor); time advances one step at a time. Throws
/// StateSpaceExceeded when a time step holds more than `cap` states.
std::optional<DynProgResult> dyn_prog(const TaskGraph& g, Time deadline, std::size_t cap = kDefaultStateCap);

/// Exact minimum makespan with cost <= budget, same state space.
std::optional<DynProgResult> dyn_prog_min_makespan(const TaskGraph& g, Cost budget,
                                                   std::size_t cap = kDefaultStateCap);

/// Runs the DP on the instance scaled by eps * d / (2n) and repairs the
/// result: cost <= OPT(d), makespan <= (1+eps) * d.
std::optional<SolveOutcome> rounded_min_cost(const TaskGraph& g, Time deadline, Ratio eps,
                                             std::size_t cap = kDefaultStateCap);

/// Halving search over deadline estimates: cost <= budget, makespan <= (1+eps) * OPT(budget).
std::optional<SolveOutcome> fptas_min_makespan(const TaskGraph& g, Cost budget, Ratio eps,
                                               std::size_t cap = kDefaultStateCap);

/// Maps a schedule of `scaled` (the graph scaled by rho) back to `g`: jobs
/// keep their scaled start times multiplied by rho; whenever one cannot
/// start yet, it and every later job move back by the missing amount. The
/// result is then re-timed as early as possible.
Schedule unscale_schedule(const TaskGraph& g, const TaskGraph& scaled, const Schedule& s, Ratio rho);

struct RawParetoPoint {
    ParetoPoint point;
    Time scaled_time = 0;  // completion step in the scaled DP
    Ratio rho{1, 1};
};

/// Every point produced by the rounds, before dominance filtering.
std::vector<RawParetoPoint> approx_pareto_raw(const TaskGraph& g, Ratio alpha, std::size_t cap = kDefaultStateCap);

/// For every exact Pareto point some returned point is within a factor
/// (1+alpha) in both makespan and cost. Mutually non-dominating, by
/// increasing makespan.
std::vector<ParetoPoint> approx_pareto(const TaskGraph& g, Ratio alpha, std::size_t cap = kDefaultStateCap);

}  // namespace svc
