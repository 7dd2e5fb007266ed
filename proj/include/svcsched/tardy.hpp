#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svcsched/time.hpp"

namespace svc {

/// Job for 1||sum w_j U_j. An infinite weight means the job must be early; a
/// negative due date means it can never be early.
struct TardyJob {
    Time p = 0;
    ExtTime w = 0;
    Time d = 0;
};

struct WntjResult {
    ExtTime late_weight = 0;       // inf when the mandatory jobs cannot all be early
    std::vector<std::size_t> early;  // input indices in processing order
    std::vector<Time> completion;    // completion time of each early job, same order

    bool feasible() const { return late_weight.finite(); }
};

/// Lawler-Moore dynamic program over jobs in due-date order, indexed by the
/// total processing time of the early jobs. Early jobs run back to back from
/// time 0 in due-date order.
WntjResult solve_wntj(std::span<const TardyJob> jobs);

/// Job with a release date and a shared deadline.
struct ReleaseJob {
    Time p = 0;
    ExtTime w = 0;
    Time r = 0;
};

/// Common deadline D with release dates, solved by reversing time. The early
/// jobs are returned in forward processing order; each starts no earlier
/// than its release date and all finish by D.
WntjResult solve_wntj_release(std::span<const ReleaseJob> jobs, Time deadline);

}  // namespace svc
