#include "svcsched/tardy.hpp"

#include <algorithm>
#include <numeric>

namespace svc {

WntjResult solve_wntj(std::span<const TardyJob> jobs) {
    const std::size_t n = jobs.size();
    std::vector<std::size_t> edd(n);
    std::iota(edd.begin(), edd.end(), 0);
    std::stable_sort(edd.begin(), edd.end(), [&](std::size_t a, std::size_t b) { return jobs[a].d < jobs[b].d; });

    Time total = 0;
    Time max_due = 0;
    for (const auto& j : jobs) {
        total += j.p;
        max_due = std::max(max_due, j.d);
    }
    const Time horizon = std::min(total, max_due);
    const std::size_t width = static_cast<std::size_t>(horizon) + 1;

    // f[k][t]: least late weight over the first k jobs with early load exactly t
    std::vector<std::vector<ExtTime>> f(n + 1, std::vector<ExtTime>(width, kInf));
    f[0][0] = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const TardyJob& job = jobs[edd[k]];
        for (std::size_t t = 0; t < width; ++t) {
            if (f[k][t].is_inf())
                continue;
            f[k + 1][t] = std::min(f[k + 1][t], f[k][t] + job.w);
            Time end = static_cast<Time>(t) + job.p;
            if (end <= job.d && end <= horizon)
                f[k + 1][end] = std::min(f[k + 1][end], f[k][t]);
        }
    }

    WntjResult res;
    std::size_t at = 0;
    res.late_weight = kInf;
    for (std::size_t t = 0; t < width; ++t)
        if (f[n][t] < res.late_weight) {
            res.late_weight = f[n][t];
            at = t;
        }
    if (res.late_weight.is_inf())
        return res;

    for (std::size_t k = n; k > 0; --k) {
        const TardyJob& job = jobs[edd[k - 1]];
        if (f[k - 1][at].finite() && f[k - 1][at] + job.w == f[k][at])
            continue;
        res.early.push_back(edd[k - 1]);
        at -= static_cast<std::size_t>(job.p);
    }
    std::reverse(res.early.begin(), res.early.end());
    Time clock = 0;
    for (std::size_t i : res.early) {
        clock += jobs[i].p;
        res.completion.push_back(clock);
    }
    return res;
}

WntjResult solve_wntj_release(std::span<const ReleaseJob> jobs, Time deadline) {
    std::vector<TardyJob> mirrored;
    mirrored.reserve(jobs.size());
    for (const auto& j : jobs)
        mirrored.push_back(TardyJob{j.p, j.w, deadline - j.r});
    WntjResult rev = solve_wntj(mirrored);
    if (!rev.feasible())
        return rev;

    // A job occupying [S, S + p] in mirrored time occupies [D - S - p, D - S].
    WntjResult res;
    res.late_weight = rev.late_weight;
    for (std::size_t k = rev.early.size(); k > 0; --k) {
        std::size_t i = rev.early[k - 1];
        Time mirrored_start = rev.completion[k - 1] - jobs[i].p;
        res.early.push_back(i);
        res.completion.push_back(deadline - mirrored_start);
    }
    return res;
}

}  // namespace svc
