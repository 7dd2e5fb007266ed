#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "svcsched/graph.hpp"

namespace svc {

struct ParetoPoint {
    Time makespan = 0;
    Cost cost = 0;
    Schedule witness;
};

inline constexpr std::size_t kOracleDefaultCap = 12;

/// Exhaustive solver: every location partition of the middle jobs, and for
/// each partition every server order consistent with precedence. Each
/// (partition, order) pair is timed by a longest-path pass. Throws
/// InstanceTooLarge when the graph has more than `max_jobs` jobs.
class Oracle {
public:
    explicit Oracle(const TaskGraph& g, std::size_t max_jobs = kOracleDefaultCap);

    std::optional<Schedule> decide(Time deadline, Cost budget) const;
    std::optional<Schedule> min_cost(Time deadline) const;
    std::optional<Schedule> min_makespan(Cost budget) const;
    /// Non-dominated (makespan, cost) pairs, by increasing makespan.
    std::vector<ParetoPoint> pareto() const;

private:
    struct Entry {
        std::uint64_t mask;
        Cost cost;
        Time makespan;
        Schedule schedule;
    };
    const TaskGraph* g_;
    std::vector<Entry> entries_;  // partitions that admit some schedule
};

std::optional<Schedule> oracle_decide(const TaskGraph& g, Time deadline, Cost budget,
                                      std::size_t max_jobs = kOracleDefaultCap);
std::vector<ParetoPoint> oracle_pareto(const TaskGraph& g, std::size_t max_jobs = kOracleDefaultCap);

}  // namespace svc
