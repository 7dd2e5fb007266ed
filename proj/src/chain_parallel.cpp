#include "svcsched/chain_parallel.hpp"

#include <algorithm>
#include <limits>

#include "svcsched/analysis.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/scaling.hpp"
#include "svcsched/timing.hpp"

namespace svc {

namespace {

constexpr Cost kNoCost = std::numeric_limits<Cost>::max();

Cost add_cost(Cost a, Cost b) { return a == kNoCost || b == kNoCost ? kNoCost : a + b; }

Cost cloud_cost(const TaskGraph& g, JobId j) { return g.pc(j).is_inf() ? kNoCost : g.pc(j).value(); }

Time finite_server_total(const TaskGraph& g) {
    Time total = 0;
    for (JobId j = 0; j < g.size(); ++j)
        if (g.ps(j).finite())
            total += g.ps(j).value();
    return total;
}

// Assignment found by a DP together with its value in the DP's time units.
struct Plan {
    std::vector<Loc> loc;
    Time time = 0;
    Cost cost = 0;
};

Schedule time_plan(const TaskGraph& g, const std::vector<Loc>& loc, const std::vector<JobId>& order) {
    std::vector<JobId> servers;
    for (JobId j : order)
        if (loc[j] == Loc::Server && g.ps(j) != ExtTime(0))
            servers.push_back(j);
    return timed_schedule(g, loc, servers);
}

// ---- chains ----------------------------------------------------------------

// c[t][i][loc]: least cost such that the i-th chain job completes by t on loc.
// Times come from `gt`, costs from `g`.
class ChainTable {
public:
    ChainTable(const TaskGraph& gt, const TaskGraph& g, const std::vector<JobId>& chain, Time horizon)
        : gt_(gt), g_(g), chain_(chain), h_(horizon), c_(static_cast<std::size_t>(horizon + 1) * chain.size() * 2, kNoCost) {
        for (Time t = 0; t <= h_; ++t)
            at(t, 0, Loc::Server) = 0;
        for (std::size_t i = 1; i < chain_.size(); ++i) {
            const Time delay = gt_.edge(*gt_.find_edge(chain_[i - 1], chain_[i])).delay;
            for (Loc here : {Loc::Server, Loc::Cloud}) {
                const ExtTime p = gt_.p(chain_[i], here);
                if (p.is_inf())
                    continue;
                const Cost own = here == Loc::Cloud ? cloud_cost(g_, chain_[i]) : 0;
                for (Time t = 0; t <= h_; ++t) {
                    Cost best = kNoCost;
                    for (Loc prev : {Loc::Server, Loc::Cloud}) {
                        Time back = t - p.value() - (prev != here ? delay : 0);
                        if (back >= 0)
                            best = std::min(best, at(back, i - 1, prev));
                    }
                    at(t, i, here) = add_cost(best, own);
                }
            }
        }
    }

    Cost final_cost(Time t) const { return at(t, chain_.size() - 1, Loc::Server); }

    std::vector<Loc> backtrack(Time t) const {
        std::vector<Loc> loc(gt_.size(), Loc::Server);
        Loc here = Loc::Server;
        for (std::size_t i = chain_.size() - 1; i > 0; --i) {
            loc[chain_[i]] = here;
            const Time delay = gt_.edge(*gt_.find_edge(chain_[i - 1], chain_[i])).delay;
            const Cost own = here == Loc::Cloud ? cloud_cost(g_, chain_[i]) : 0;
            const Cost target = at(t, i, here);
            for (Loc prev : {Loc::Server, Loc::Cloud}) {
                Time back = t - gt_.p(chain_[i], here).value() - (prev != here ? delay : 0);
                if (back >= 0 && add_cost(at(back, i - 1, prev), own) == target) {
                    t = back;
                    here = prev;
                    break;
                }
            }
        }
        return loc;
    }

private:
    Cost& at(Time t, std::size_t i, Loc l) {
        return c_[(static_cast<std::size_t>(t) * chain_.size() + i) * 2 + (l == Loc::Cloud)];
    }
    Cost at(Time t, std::size_t i, Loc l) const {
        return c_[(static_cast<std::size_t>(t) * chain_.size() + i) * 2 + (l == Loc::Cloud)];
    }

    const TaskGraph& gt_;
    const TaskGraph& g_;
    const std::vector<JobId>& chain_;
    Time h_;
    std::vector<Cost> c_;
};

std::optional<Plan> chain_min_cost(const TaskGraph& gt, const TaskGraph& g, const std::vector<JobId>& chain,
                                   Time deadline) {
    if (deadline < 0)
        return std::nullopt;
    const Time h = std::min(deadline, finite_server_total(gt));
    ChainTable table(gt, g, chain, h);
    Cost c = table.final_cost(h);
    if (c == kNoCost)
        return std::nullopt;
    // earliest time reaching the same cost keeps the witness tight
    Time t = h;
    while (t > 0 && table.final_cost(t - 1) == c)
        --t;
    return Plan{table.backtrack(t), t, c};
}

std::optional<Plan> chain_min_makespan(const TaskGraph& gt, const TaskGraph& g, const std::vector<JobId>& chain,
                                       Cost budget, Time horizon) {
    ChainTable table(gt, g, chain, horizon);
    for (Time t = 0; t <= horizon; ++t)
        if (Cost c = table.final_cost(t); c <= budget)
            return Plan{table.backtrack(t), t, c};
    return std::nullopt;
}

// ---- fully parallel ----------------------------------------------------------

// c[k][load]: least cost of placing the first k middle jobs with server load
// exactly `load`; a job may go to the cloud only if p_c + delays <= threshold.
class ParallelTable {
public:
    ParallelTable(const TaskGraph& gt, const TaskGraph& g, const std::vector<JobId>& middle, Time threshold,
                  Time horizon)
        : gt_(gt), g_(g), middle_(middle), width_(static_cast<std::size_t>(horizon) + 1),
          c_((middle.size() + 1) * width_, kNoCost), cloud_ok_(middle.size(), false) {
        for (std::size_t k = 0; k < middle_.size(); ++k) {
            JobId j = middle_[k];
            ExtTime total = gt_.pc(j) + gt_.edge(*gt_.find_edge(gt_.source(), j)).delay +
                            gt_.edge(*gt_.find_edge(j, gt_.sink())).delay;
            cloud_ok_[k] = total.finite() && total.value() <= threshold;
        }
        at(0, 0) = 0;
        for (std::size_t k = 0; k < middle_.size(); ++k) {
            JobId j = middle_[k];
            const ExtTime ps = gt_.ps(j);
            const Cost pc = cloud_cost(g_, j);
            for (std::size_t load = 0; load < width_; ++load) {
                Cost best = kNoCost;
                if (ps.finite() && static_cast<Time>(load) >= ps.value())
                    best = at(k, load - static_cast<std::size_t>(ps.value()));
                if (cloud_ok_[k])
                    best = std::min(best, add_cost(at(k, load), pc));
                at(k + 1, load) = best;
            }
        }
    }

    Cost final_cost(Time load) const { return at(middle_.size(), static_cast<std::size_t>(load)); }

    std::vector<Loc> backtrack(Time load_t) const {
        std::vector<Loc> loc(gt_.size(), Loc::Server);
        auto load = static_cast<std::size_t>(load_t);
        for (std::size_t k = middle_.size(); k > 0; --k) {
            JobId j = middle_[k - 1];
            const ExtTime ps = gt_.ps(j);
            const Cost target = at(k, load);
            if (ps.finite() && static_cast<Time>(load) >= ps.value() &&
                at(k - 1, load - static_cast<std::size_t>(ps.value())) == target) {
                load -= static_cast<std::size_t>(ps.value());
                continue;
            }
            loc[j] = Loc::Cloud;
        }
        return loc;
    }

private:
    Cost& at(std::size_t k, std::size_t load) { return c_[k * width_ + load]; }
    Cost at(std::size_t k, std::size_t load) const { return c_[k * width_ + load]; }

    const TaskGraph& gt_;
    const TaskGraph& g_;
    const std::vector<JobId>& middle_;
    std::size_t width_;
    std::vector<Cost> c_;
    std::vector<bool> cloud_ok_;
};

std::optional<Plan> parallel_min_cost(const TaskGraph& gt, const TaskGraph& g, const std::vector<JobId>& middle,
                                      Time deadline) {
    if (deadline < 0)
        return std::nullopt;
    const Time h = std::min(deadline, finite_server_total(gt));
    ParallelTable table(gt, g, middle, deadline, h);
    std::optional<Plan> best;
    for (Time load = 0; load <= h; ++load)
        if (Cost c = table.final_cost(load); c != kNoCost && (!best || c < best->cost))
            best = Plan{{}, load, c};
    if (best)
        best->loc = table.backtrack(best->time);
    return best;
}

Time cloud_span(const TaskGraph& gt, JobId j) {
    ExtTime total = gt.pc(j) + gt.edge(*gt.find_edge(gt.source(), j)).delay + gt.edge(*gt.find_edge(j, gt.sink())).delay;
    return total.finite() ? total.value() : -1;
}

// The cloud part finishes at the largest p_c + delays among cloud jobs, so fix
// that value as a threshold and minimise the server load separately for each.
std::optional<Plan> parallel_min_makespan(const TaskGraph& gt, const TaskGraph& g, const std::vector<JobId>& middle,
                                          Cost budget, Time horizon) {
    std::vector<Time> thresholds{0};
    for (JobId j : middle)
        if (Time s = cloud_span(gt, j); s >= 0 && s <= horizon)
            thresholds.push_back(s);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const Time h = std::min(horizon, finite_server_total(gt));
    std::optional<Plan> best;
    for (Time threshold : thresholds) {
        ParallelTable table(gt, g, middle, threshold, h);
        for (Time load = 0; load <= h; ++load) {
            Cost c = table.final_cost(load);
            if (c > budget)
                continue;
            Time value = std::max(threshold, load);
            if (!best || value < best->time || (value == best->time && c < best->cost)) {
                best = Plan{{}, value, c};
                best->loc = table.backtrack(load);
            }
            break;  // larger loads only get worse for this threshold
        }
    }
    return best;
}

// ---- dispatch ----------------------------------------------------------------

enum class Kind { Chain, Parallel };

struct Prepared {
    Kind kind;
    std::vector<JobId> order;  // chain order, or middle jobs for the parallel case
};

Prepared prepare(const TaskGraph& g, std::optional<Kind> want) {
    ShapeClass sc = classify_shape(g);
    if (sc.tag == ShapeTag::Chain && want != Kind::Parallel)
        return {Kind::Chain, sc.spine};
    if (sc.tag == ShapeTag::FullyParallel && want != Kind::Chain)
        return {Kind::Parallel, sc.blocks.at(0)};
    throw ShapeMismatch(std::string("engine needs a ") +
                        (want == Kind::Chain ? "chain" : want == Kind::Parallel ? "fully parallel" : "chain or fully parallel") +
                        " graph, got " + std::string(to_string(sc.tag)));
}

std::optional<Plan> run_min_cost(const Prepared& p, const TaskGraph& gt, const TaskGraph& g, Time deadline) {
    return p.kind == Kind::Chain ? chain_min_cost(gt, g, p.order, deadline) : parallel_min_cost(gt, g, p.order, deadline);
}

std::optional<Plan> run_min_makespan(const Prepared& p, const TaskGraph& gt, const TaskGraph& g, Cost budget,
                                     Time horizon) {
    return p.kind == Kind::Chain ? chain_min_makespan(gt, g, p.order, budget, horizon)
                                 : parallel_min_makespan(gt, g, p.order, budget, horizon);
}

std::optional<SolveOutcome> exact(const TaskGraph& g, const SolveQuery& q, Kind kind, const char* engine) {
    Prepared p = prepare(g, kind);
    std::optional<Plan> plan = q.mode == Mode::MinCost ? run_min_cost(p, g, g, q.bound)
                                                       : run_min_makespan(p, g, g, q.bound, finite_server_total(g));
    if (!plan)
        return std::nullopt;
    return make_outcome(g, time_plan(g, plan->loc, p.order), Guarantee::exact(), engine);
}

}  // namespace

std::optional<SolveOutcome> dp_parallel(const TaskGraph& g, const SolveQuery& q) {
    return exact(g, q, Kind::Parallel, "parallel");
}

std::optional<SolveOutcome> dp_chain(const TaskGraph& g, const SolveQuery& q) { return exact(g, q, Kind::Chain, "chain"); }

std::optional<SolveOutcome> fptas_chain_parallel(const TaskGraph& g, const SolveQuery& q) {
    if (!q.epsilon)
        throw InputError("the scaled chain/parallel engine needs an epsilon");
    const Ratio eps = *q.epsilon;
    Prepared p = prepare(g, std::nullopt);
    const char* engine = p.kind == Kind::Chain ? "chain" : "parallel";
    const Guarantee guarantee = q.mode == Mode::MinCost ? Guarantee::cost_opt(eps) : Guarantee::makespan_within(eps);

    if (auto zero = zero_makespan_schedule(g))
        return make_outcome(g, *zero, guarantee, engine);

    if (q.mode == Mode::MinCost) {
        const Ratio rho = scale_factor(eps, q.bound, g.size());
        const TaskGraph gt = scale_graph(g, rho);
        auto plan = run_min_cost(p, gt, g, scale_up_deadline(q.bound, rho));
        if (!plan)
            return std::nullopt;
        return make_outcome(g, time_plan(g, plan->loc, p.order), guarantee, engine);
    }

    auto best = halving_search(g, eps, [&](const TaskGraph& gt, Ratio, std::optional<Time> deadline) -> std::optional<Schedule> {
        Time horizon = deadline ? *deadline : finite_server_total(gt);
        auto plan = run_min_makespan(p, gt, g, q.bound, horizon);
        if (!plan)
            return std::nullopt;
        return time_plan(g, plan->loc, p.order);
    });
    if (!best)
        return std::nullopt;
    return make_outcome(g, *best, guarantee, engine);
}

}  // namespace svc
