#include "svcsched/heuristics.hpp"

#include <algorithm>
#include <numeric>

#include "svcsched/analysis.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/timing.hpp"

namespace svc {

namespace {

bool endpoints_ok(const TaskGraph& g) {
    for (JobId e : {g.source(), g.sink()})
        if (g.ps(e) != ExtTime(0))
            return false;
    return true;
}

Cost cloud_cost(const TaskGraph& g, const std::vector<Loc>& loc) {
    Cost c = 0;
    for (JobId j = 0; j < g.size(); ++j)
        if (loc[j] == Loc::Cloud)
            c += g.pc(j).value();
    return c;
}

bool is_middle(const TaskGraph& g, JobId j) { return j != g.source() && j != g.sink(); }

// Number of middle jobs on the longest path ending (forward) or starting
// (backward) at each job, the job included.
std::vector<Time> unit_levels(const TaskGraph& g, bool forward) {
    std::vector<Time> level(g.size(), 0);
    auto order = g.topo_order();
    if (!forward)
        std::reverse(order.begin(), order.end());
    for (JobId j : order) {
        Time best = 0;
        auto edges = forward ? g.in_edges(j) : g.out_edges(j);
        for (EdgeId e : edges) {
            JobId k = forward ? g.edge(e).from : g.edge(e).to;
            best = std::max(best, level[k]);
        }
        level[j] = best + (is_middle(g, j) ? 1 : 0);
    }
    return level;
}

// Cloud profile packed toward one end of [0, horizon], with jobs pulled onto
// the server at the other end one slot at a time, plus one server job in the
// communication slot at the far end.
Schedule pull_variant(const TaskGraph& g, Time horizon, bool pull_tail) {
    const std::size_t n = g.size();
    std::vector<Loc> loc(n, Loc::Cloud);
    std::vector<Time> completion(n, 0);
    loc[g.source()] = loc[g.sink()] = Loc::Server;
    completion[g.sink()] = horizon;

    const auto level = unit_levels(g, pull_tail);
    std::vector<JobId> middle = g.middle_jobs();
    for (JobId j : middle)
        completion[j] = pull_tail ? level[j] + 1 : horizon - level[j];

    // Neighbours toward the pulled end must already be on the server.
    auto toward = [&](JobId j) { return pull_tail ? g.out_edges(j).size() : g.in_edges(j).size(); };
    std::vector<JobId> order = middle;
    std::sort(order.begin(), order.end(), [&](JobId a, JobId b) {
        Time ka = pull_tail ? -completion[a] : completion[a];
        Time kb = pull_tail ? -completion[b] : completion[b];
        if (ka != kb)
            return ka < kb;
        if (toward(a) != toward(b))
            return toward(a) < toward(b);
        return a < b;
    });

    Time pulled = 0;
    for (JobId j : order) {
        const Time slot = pull_tail ? horizon - pulled : pulled + 1;  // completion on the server
        if (slot < 1 || slot > horizon)
            break;
        bool fits = true;
        if (pull_tail) {
            for (EdgeId e : g.in_edges(j)) {
                JobId k = g.edge(e).from;
                if (loc[k] == Loc::Cloud && completion[k] > slot - 2)
                    fits = false;
            }
        } else {
            for (EdgeId e : g.out_edges(j)) {
                JobId k = g.edge(e).to;
                if (loc[k] == Loc::Cloud && completion[k] - 1 < slot + 1)
                    fits = false;
            }
        }
        if (!fits)
            break;
        loc[j] = Loc::Server;
        completion[j] = slot;
        ++pulled;
    }

    // The slot spent communicating with the far end can host one job whose
    // only neighbour on that side is the source or sink.
    const Time far_slot = pull_tail ? 1 : horizon;
    const bool slot_free = pull_tail ? horizon - pulled >= 1 : pulled + 1 <= horizon - 1;
    if (slot_free) {
        for (JobId j : middle) {
            if (loc[j] != Loc::Cloud)
                continue;
            auto edges = pull_tail ? g.in_edges(j) : g.out_edges(j);
            bool at_end = std::all_of(edges.begin(), edges.end(), [&](EdgeId e) {
                JobId k = pull_tail ? g.edge(e).from : g.edge(e).to;
                return k == (pull_tail ? g.source() : g.sink());
            });
            if (!at_end)
                continue;
            loc[j] = Loc::Server;
            completion[j] = far_slot;
            break;
        }
    }
    return compact(g, Schedule{std::move(loc), std::move(completion)});
}

// Chain on the server, everything else in the cloud, then any further job
// that still fits on the server within the deadline.
std::optional<Schedule> long_chain_variant(const TaskGraph& g, Time deadline, Time horizon) {
    std::vector<Loc> loc(g.size(), Loc::Cloud);
    for (JobId j : longest_chain(g).jobs)
        loc[j] = Loc::Server;
    Schedule best = list_schedule(g, loc);
    for (JobId j : g.middle_jobs()) {
        if (loc[j] == Loc::Server)
            continue;
        loc[j] = Loc::Server;
        Schedule trial = list_schedule(g, loc);
        if (trial.makespan(g) <= std::max(deadline, best.makespan(g)))
            best = std::move(trial);
        else
            loc[j] = Loc::Cloud;
    }
    if (best.makespan(g) > horizon)
        return std::nullopt;
    return compact(g, best);
}

// Cloud job with the latest start whose successors all sit on the server.
std::optional<JobId> latest_cloud_job(const TaskGraph& g, const Schedule& s) {
    std::optional<JobId> pick;
    const auto& rank = g.topo_rank();
    for (JobId j : g.middle_jobs()) {
        if (s.loc[j] != Loc::Cloud)
            continue;
        Time start = s.completion[j] - g.pc(j).value();
        if (!pick) {
            pick = j;
            continue;
        }
        Time best = s.completion[*pick] - g.pc(*pick).value();
        if (start > best || (start == best && rank[j] > rank[*pick]))
            pick = j;
    }
    return pick;
}

// The move sequence of the no-delay procedure, from the longest chain until
// everything is on the server. Each entry is a timed schedule.
class NoDelayMoves {
public:
    explicit NoDelayMoves(const TaskGraph& g) : g_(g), loc_(g.size(), Loc::Cloud) {
        order_ = longest_chain(g).jobs;
        for (JobId j : order_)
            loc_[j] = Loc::Server;
        current_ = timed_schedule(g, loc_, order_);
    }

    const Schedule& current() const { return current_; }
    Cost cost() const { return cloud_cost(g_, loc_); }

    bool step() {
        auto j = latest_cloud_job(g_, current_);
        if (!j)
            return false;
        std::size_t pos = order_.size();
        for (EdgeId e : g_.out_edges(*j)) {
            auto it = std::find(order_.begin(), order_.end(), g_.edge(e).to);
            pos = std::min(pos, static_cast<std::size_t>(it - order_.begin()));
        }
        order_.insert(order_.begin() + static_cast<std::ptrdiff_t>(pos), *j);
        loc_[*j] = Loc::Server;
        current_ = timed_schedule(g_, loc_, order_);
        return true;
    }

private:
    const TaskGraph& g_;
    std::vector<Loc> loc_;
    std::vector<JobId> order_;  // server jobs including source and sink
    Schedule current_;
};

}  // namespace

bool is_unit_instance(const TaskGraph& g) {
    if (!endpoints_ok(g))
        return false;
    for (JobId j : g.middle_jobs())
        if (g.ps(j) != ExtTime(1) || g.pc(j) != ExtTime(1))
            return false;
    return std::all_of(g.edges().begin(), g.edges().end(), [](const Edge& e) { return e.delay == 1; });
}

bool is_nodelay_identical(const TaskGraph& g) {
    if (!endpoints_ok(g))
        return false;
    for (JobId j : g.middle_jobs())
        if (g.ps(j).is_inf() || g.ps(j) != g.pc(j))
            return false;
    return std::all_of(g.edges().begin(), g.edges().end(), [](const Edge& e) { return e.delay == 0; });
}

bool is_nodelay_unit(const TaskGraph& g) {
    if (!is_nodelay_identical(g))
        return false;
    for (JobId j : g.middle_jobs())
        if (g.ps(j) != ExtTime(1))
            return false;
    return true;
}

std::optional<SolveOutcome> unit_schedule(const TaskGraph& g, Time deadline, Ratio eps) {
    if (!is_unit_instance(g))
        throw ShapeMismatch("unit engine needs unit sizes and unit delays");
    if (eps.num <= 0 || Ratio{1, 1} < eps)
        throw InputError("epsilon must lie in (0, 1]");
    const Ratio aug = Ratio{1, 1} + eps;
    const Guarantee guarantee =
        Guarantee::factor_of(aug, aug / (Ratio{2, 1} * eps), "makespan relative to the deadline");
    const Time horizon = mul_floor(deadline, aug);
    const Time n = static_cast<Time>(g.middle_jobs().size());
    const Time chain = longest_chain(g).length;

    if (chain > deadline)
        return std::nullopt;
    if (n <= horizon) {
        std::vector<Loc> loc(g.size(), Loc::Server);
        return make_outcome(g, list_schedule(g, loc), guarantee, "unit");
    }
    if (chain >= deadline - 1) {
        auto s = long_chain_variant(g, deadline, horizon);
        if (!s)
            return std::nullopt;
        return make_outcome(g, *s, guarantee, "unit");
    }
    Schedule tail = pull_variant(g, horizon, true);
    Schedule head = pull_variant(g, horizon, false);
    Schedule& pick = head.cost(g) < tail.cost(g) ? head : tail;
    return make_outcome(g, std::move(pick), guarantee, "unit");
}

SolveOutcome nodelay_identical_makespan(const TaskGraph& g, Cost budget) {
    if (!is_nodelay_identical(g))
        throw ShapeMismatch("no-delay engine needs zero delays and identical sizes");
    NoDelayMoves moves(g);
    while (moves.cost() > budget && moves.step()) {
    }
    Time largest = 0;
    for (JobId j : g.middle_jobs())
        largest = std::max(largest, g.ps(j).value());
    return make_outcome(g, moves.current(), Guarantee::factor_of({2, 1}, {1, 1}, "additive error at most " + std::to_string(largest)),
                        "nodelay");
}

std::optional<SolveOutcome> nodelay_unit_exact(const TaskGraph& g, const SolveQuery& q) {
    if (!is_nodelay_unit(g))
        throw ShapeMismatch("exact no-delay engine needs zero delays and unit sizes");
    NoDelayMoves moves(g);
    if (q.mode == Mode::MinMakespan) {
        while (moves.cost() > q.bound && moves.step()) {
        }
        return make_outcome(g, moves.current(), Guarantee::exact(), "nodelay");
    }
    if (moves.current().makespan(g) > q.bound)
        return std::nullopt;
    Schedule best = moves.current();
    while (moves.step() && moves.current().makespan(g) <= q.bound)
        best = moves.current();
    return make_outcome(g, std::move(best), Guarantee::exact(), "nodelay");
}

}  // namespace svc
