#pragma once

#include <span>
#include <vector>

#include "svcsched/graph.hpp"

namespace svc {

/// Earliest completion times for a fixed assignment and a fixed order of the
/// server jobs. Every constraint is a lower bound C(v) >= C(u) + w, so the
/// result is the longest path in the constraint graph. Zero-length server
/// jobs in the order are ignored for sequencing. Throws std::logic_error if
/// a positive-length server job is missing from the order or the order
/// contradicts precedence.
Schedule timed_schedule(const TaskGraph& g, std::span<const Loc> loc, std::span<const JobId> server_order);

/// Greedy timing for an assignment alone: repeatedly starts the ready server
/// job with the earliest release (ties by topological rank).
Schedule list_schedule(const TaskGraph& g, std::span<const Loc> loc);

/// Positive-length server jobs ordered by start time.
std::vector<JobId> server_order_of(const TaskGraph& g, const Schedule& s);

/// Re-times a schedule ASAP keeping its assignment and server order.
Schedule compact(const TaskGraph& g, const Schedule& s);

}  // namespace svc
