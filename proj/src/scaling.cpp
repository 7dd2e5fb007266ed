#include "svcsched/scaling.hpp"

#include "svcsched/errors.hpp"

namespace svc {

Ratio scale_factor(Ratio eps, Time bound, std::size_t n, std::int64_t k) {
    Ratio rho = (eps * Ratio{bound, k * static_cast<std::int64_t>(n)}).reduced();
    if (rho <= Ratio{1, 1})
        return Ratio{1, 1};
    return rho;
}

namespace {

ExtTime scaled(ExtTime x, Ratio inv) { return x.is_inf() ? kInf : ExtTime(mul_floor(x.value(), inv)); }

}  // namespace

TaskGraph scale_graph(const TaskGraph& g, Ratio rho) {
    const Ratio inv{rho.den, rho.num};
    std::vector<Job> jobs = g.jobs();
    for (auto& j : jobs) {
        j.ps = scaled(j.ps, inv);
        j.pc = scaled(j.pc, inv);
    }
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges)
        e.delay = mul_floor(e.delay, inv);
    return TaskGraph(std::move(jobs), std::move(edges), g.source(), g.sink());
}

Time scale_up_deadline(Time d, Ratio rho) { return mul_ceil(d, Ratio{rho.den, rho.num}); }

std::optional<Schedule> halving_search(const TaskGraph& g, Ratio eps, const ScaledRun& run) {
    Time d0 = 0;
    for (JobId j = 0; j < g.size(); ++j) {
        if (g.ps(j).is_inf())
            throw InputError("budget search needs finite server times (all-server schedule)");
        d0 += g.ps(j).value();
    }
    const auto n = static_cast<std::int64_t>(g.size());
    // deadline estimate d0 / 2^i, factor eps * d0 / (4n * 2^i)
    const Time fixed_deadline = mul_ceil(4 * n, Ratio{eps.den, eps.num});
    std::optional<Schedule> best;
    auto keep = [&](std::optional<Schedule> s) {
        if (s && (!best || s->makespan(g) < best->makespan(g)))
            best = std::move(s);
        return s.has_value();
    };
    for (Ratio rho = eps * Ratio{d0, 4 * n};; rho = rho * Ratio{1, 2}) {
        if (rho <= Ratio{1, 1}) {
            keep(run(g, Ratio{1, 1}, std::nullopt));
            break;
        }
        if (!keep(run(scale_graph(g, rho), rho, fixed_deadline)))
            break;
    }
    return best;
}

}  // namespace svc
