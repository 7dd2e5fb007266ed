#include "svcsched/oracle.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "svcsched/errors.hpp"

namespace svc {

namespace {

// Longest-path timing of one (partition, server order) pair. Kept separate
// from the production timing code so the two can check each other.
class Evaluator {
public:
    Evaluator(const TaskGraph& g, const std::vector<Loc>& loc) : g_(g), loc_(loc), memo_(g.size()), prev_(g.size()) {}

    Time run(const std::vector<JobId>& order, std::vector<Time>& completion) {
        std::fill(memo_.begin(), memo_.end(), -1);
        std::fill(prev_.begin(), prev_.end(), kNone);
        for (std::size_t i = 1; i < order.size(); ++i)
            prev_[order[i]] = order[i - 1];
        for (JobId v = 0; v < g_.size(); ++v)
            eval(v);
        completion = memo_;
        return memo_[g_.sink()];
    }

private:
    static constexpr JobId kNone = std::numeric_limits<JobId>::max();

    Time eval(JobId v) {
        if (memo_[v] >= 0)
            return memo_[v];
        Time start = 0;
        for (EdgeId e : g_.in_edges(v)) {
            const Edge& ed = g_.edge(e);
            Time ready = eval(ed.from) + (loc_[ed.from] != loc_[v] ? ed.delay : 0);
            start = std::max(start, ready);
        }
        if (prev_[v] != kNone)
            start = std::max(start, eval(prev_[v]));
        return memo_[v] = start + g_.p(v, loc_[v]).value();
    }

    const TaskGraph& g_;
    const std::vector<Loc>& loc_;
    std::vector<Time> memo_;
    std::vector<JobId> prev_;
};

}  // namespace

Oracle::Oracle(const TaskGraph& g, std::size_t max_jobs) : g_(&g) {
    const std::size_t n = g.size();
    if (n > max_jobs || n > 62)
        throw InstanceTooLarge("oracle limited to " + std::to_string(max_jobs) + " jobs, instance has " +
                               std::to_string(n));
    if (!g.acyclic())
        throw InputError("oracle needs an acyclic graph");

    // ancestors[v] as a bitmask, from the transitive closure
    std::vector<std::uint64_t> anc(n, 0);
    for (JobId v : g.topo_order())
        for (EdgeId e : g.in_edges(v)) {
            JobId u = g.edge(e).from;
            anc[v] |= anc[u] | (std::uint64_t{1} << u);
        }

    const auto middle = g.middle_jobs();
    const std::size_t m = middle.size();
    std::vector<Loc> loc(n, Loc::Server);
    std::vector<JobId> servers;
    std::vector<JobId> order;
    std::vector<Time> completion;

    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        bool possible = true;
        Cost cost = 0;
        for (std::size_t i = 0; i < m; ++i) {
            JobId v = middle[i];
            loc[v] = (mask >> i) & 1U ? Loc::Cloud : Loc::Server;
            if (g.p(v, loc[v]).is_inf())
                possible = false;
            else if (loc[v] == Loc::Cloud)
                cost += g.pc(v).value();
        }
        for (JobId v : {g.source(), g.sink()}) {
            loc[v] = Loc::Server;
            possible = possible && g.ps(v).finite();
        }
        if (!possible)
            continue;

        servers.clear();
        std::uint64_t server_bits = 0;
        for (JobId v = 0; v < n; ++v)
            if (loc[v] == Loc::Server && g.ps(v).value() > 0) {
                servers.push_back(v);
                server_bits |= std::uint64_t{1} << v;
            }

        Evaluator eval(g, loc);
        Entry best{mask, cost, std::numeric_limits<Time>::max(), {}};
        order.clear();
        std::uint64_t placed = 0;
        auto extend = [&](auto&& self) -> void {
            if (order.size() == servers.size()) {
                Time ms = eval.run(order, completion);
                if (ms < best.makespan) {
                    best.makespan = ms;
                    best.schedule = Schedule{loc, completion};
                }
                return;
            }
            for (JobId v : servers) {
                std::uint64_t bit = std::uint64_t{1} << v;
                if ((placed & bit) || ((anc[v] & server_bits) & ~placed))
                    continue;
                placed |= bit;
                order.push_back(v);
                self(self);
                order.pop_back();
                placed &= ~bit;
            }
        };
        extend(extend);
        entries_.push_back(std::move(best));
    }
}

std::optional<Schedule> Oracle::decide(Time deadline, Cost budget) const {
    const Entry* pick = nullptr;
    for (const auto& e : entries_)
        if (e.makespan <= deadline && e.cost <= budget &&
            (!pick || std::tie(e.makespan, e.cost) < std::tie(pick->makespan, pick->cost)))
            pick = &e;
    if (!pick)
        return std::nullopt;
    return pick->schedule;
}

std::optional<Schedule> Oracle::min_cost(Time deadline) const {
    const Entry* pick = nullptr;
    for (const auto& e : entries_)
        if (e.makespan <= deadline && (!pick || std::tie(e.cost, e.makespan) < std::tie(pick->cost, pick->makespan)))
            pick = &e;
    if (!pick)
        return std::nullopt;
    return pick->schedule;
}

std::optional<Schedule> Oracle::min_makespan(Cost budget) const {
    const Entry* pick = nullptr;
    for (const auto& e : entries_)
        if (e.cost <= budget && (!pick || std::tie(e.makespan, e.cost) < std::tie(pick->makespan, pick->cost)))
            pick = &e;
    if (!pick)
        return std::nullopt;
    return pick->schedule;
}

std::vector<ParetoPoint> Oracle::pareto() const {
    std::vector<const Entry*> sorted;
    for (const auto& e : entries_)
        sorted.push_back(&e);
    std::stable_sort(sorted.begin(), sorted.end(), [](const Entry* a, const Entry* b) {
        return std::tie(a->makespan, a->cost) < std::tie(b->makespan, b->cost);
    });
    std::vector<ParetoPoint> front;
    for (const Entry* e : sorted)
        if (front.empty() || e->cost < front.back().cost)
            front.push_back(ParetoPoint{e->makespan, e->cost, e->schedule});
    return front;
}

std::optional<Schedule> oracle_decide(const TaskGraph& g, Time deadline, Cost budget, std::size_t max_jobs) {
    return Oracle(g, max_jobs).decide(deadline, budget);
}

std::vector<ParetoPoint> oracle_pareto(const TaskGraph& g, std::size_t max_jobs) {
    return Oracle(g, max_jobs).pareto();
}

}  // namespace svc
