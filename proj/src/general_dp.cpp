#include "svcsched/general_dp.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "svcsched/analysis.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/scaling.hpp"
#include "svcsched/timing.hpp"

namespace svc {

namespace {

constexpr Cost kNoCost = std::numeric_limits<Cost>::max();

struct Tail {
    JobId job;
    Loc loc;
    Time age;  // steps since the job completed, capped
};

struct State {
    std::vector<std::uint64_t> done;
    Time server_age = 0;  // steps since the server last completed a positive-length job, capped
    std::vector<Tail> tails;  // processed jobs with an unprocessed successor, by job id
    Cost value = 0;
    std::int64_t history = -1;
};

using Key = std::vector<std::uint64_t>;

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = 1469598103934665603ULL;
        for (auto w : k) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

Key key_of(const State& s) {
    Key k = s.done;
    k.push_back(static_cast<std::uint64_t>(s.server_age));
    for (const auto& t : s.tails)
        k.push_back((static_cast<std::uint64_t>(t.age) << 1) | (t.loc == Loc::Cloud ? 1U : 0U));
    return k;
}

bool has(const std::vector<std::uint64_t>& bits, JobId j) { return (bits[j / 64] >> (j % 64)) & 1U; }

struct Placement {
    JobId job;
    Loc loc;
    Time completion;
    std::int64_t parent;
};

enum class Goal { MinCost, FirstCompletion, EveryStep };

struct Completion {
    Time t = 0;
    Cost cost = 0;
    Schedule schedule;  // in the DP's time units
};

// The DP itself. Times come from `gt`, costs from `g`.
class DynProg {
public:
    DynProg(const TaskGraph& gt, const TaskGraph& g, std::size_t cap) : gt_(gt), g_(g), cap_(cap) {
        const std::size_t n = gt.size();
        if (!gt.acyclic())
            throw InputError("graph has a cycle");
        for (JobId j = 0; j < n; ++j)
            if (gt.ps(j).finite())
                server_cap_ = std::max(server_cap_, gt.ps(j).value());
        tail_cap_.assign(n, 0);
        for (JobId j = 0; j < n; ++j)
            for (EdgeId e : gt.out_edges(j)) {
                const Edge& ed = gt.edge(e);
                for (Loc l : {Loc::Server, Loc::Cloud})
                    if (gt.p(ed.to, l).finite())
                        tail_cap_[j] = std::max(tail_cap_[j], gt.p(ed.to, l).value() + ed.delay);
            }
        // least remaining time to the sink after a job completes
        after_.assign(n, 0);
        const auto& order = gt.topo_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            JobId j = *it;
            for (EdgeId e : gt.out_edges(j)) {
                JobId k = gt.edge(e).to;
                ExtTime fastest = std::min(gt.ps(k), gt.pc(k));
                if (fastest.finite())
                    after_[j] = std::max(after_[j], fastest.value() + after_[k]);
            }
        }
    }

    std::vector<Completion> run(Time horizon, Cost budget, Goal goal) {
        const std::size_t n = gt_.size();
        const std::size_t words = (n + 63) / 64;
        std::vector<Completion> found;
        best_cost_ = kNoCost;
        peak_ = 0;
        history_.clear();

        std::vector<State> current;
        {
            State start;
            start.done.assign(words, 0);
            start.done[gt_.source() / 64] |= std::uint64_t{1} << (gt_.source() % 64);
            history_.push_back(Placement{gt_.source(), Loc::Server, 0, -1});
            start.history = 0;
            if (!gt_.out_edges(gt_.source()).empty())
                start.tails.push_back(Tail{gt_.source(), Loc::Server, 0});
            current.push_back(std::move(start));
        }

        for (Time t = 0; t <= horizon && !current.empty(); ++t) {
            std::optional<Completion> done_now;
            close_step(current, t, budget, goal, done_now);
            if (done_now) {
                if (goal == Goal::MinCost)
                    best_cost_ = std::min(best_cost_, done_now->cost);
                found.push_back(std::move(*done_now));
                if (goal == Goal::FirstCompletion)
                    break;
            }
            if (t < horizon)
                current = advance(current, t + 1, horizon);
        }
        if (goal == Goal::MinCost && !found.empty()) {
            auto best = std::min_element(found.begin(), found.end(), [](const Completion& a, const Completion& b) {
                return std::pair(a.cost, a.t) < std::pair(b.cost, b.t);
            });
            return {std::move(*best)};
        }
        return found;
    }

    std::size_t peak() const { return peak_; }

private:
    // All placements possible at step t, processed by number of finished jobs
    // so every state is final before it is expanded.
    void close_step(std::vector<State>& states, Time t, Cost budget, Goal goal, std::optional<Completion>& done_now) {
        const std::size_t n = gt_.size();
        std::unordered_map<Key, std::size_t, KeyHash> index;
        std::vector<std::vector<std::size_t>> bucket(n + 1);
        auto count = [](const State& s) {
            std::size_t c = 0;
            for (auto w : s.done)
                c += static_cast<std::size_t>(std::popcount(w));
            return c;
        };
        for (std::size_t i = 0; i < states.size(); ++i) {
            index.emplace(key_of(states[i]), i);
            bucket[count(states[i])].push_back(i);
        }

        for (std::size_t level = 0; level <= n; ++level) {
            for (std::size_t b = 0; b < bucket[level].size(); ++b) {
                const std::size_t si = bucket[level][b];
                for (JobId j = 0; j < n; ++j) {
                    if (has(states[si].done, j) || !ready(states[si], j))
                        continue;
                    for (Loc l : {Loc::Server, Loc::Cloud}) {
                        const State& s = states[si];
                        if (!fits(s, j, l))
                            continue;
                        Cost value = s.value;
                        if (l == Loc::Cloud)
                            value += g_.pc(j).value();
                        if (value > budget || (goal == Goal::MinCost && value >= best_cost_))
                            continue;
                        history_.push_back(Placement{j, l, t, s.history});
                        const std::int64_t node = static_cast<std::int64_t>(history_.size()) - 1;
                        if (j == gt_.sink()) {
                            if (!done_now || value < done_now->cost)
                                done_now = Completion{t, value, schedule_from(node)};
                            continue;
                        }
                        State next = place(s, j, l);
                        next.value = value;
                        next.history = node;
                        Key k = key_of(next);
                        auto it = index.find(k);
                        if (it == index.end()) {
                            index.emplace(std::move(k), states.size());
                            bucket[level + 1].push_back(states.size());
                            states.push_back(std::move(next));
                            if (states.size() > cap_)
                                throw StateSpaceExceeded("dynamic program exceeded " + std::to_string(cap_) +
                                                         " states in one step (largest cut seen: " +
                                                         std::to_string(widest_) + " open jobs)");
                        } else if (value < states[it->second].value) {
                            states[it->second].value = value;
                            states[it->second].history = node;
                        }
                    }
                }
            }
        }
        peak_ = std::max(peak_, states.size());
    }

    bool ready(const State& s, JobId j) const {
        for (EdgeId e : gt_.in_edges(j))
            if (!has(s.done, gt_.edge(e).from))
                return false;
        return true;
    }

    const Tail& tail_of(const State& s, JobId k) const {
        return *std::lower_bound(s.tails.begin(), s.tails.end(), k, [](const Tail& t, JobId id) { return t.job < id; });
    }

    bool fits(const State& s, JobId j, Loc l) const {
        const ExtTime p = gt_.p(j, l);
        if (p.is_inf())
            return false;
        if (l == Loc::Server && p.value() > 0 && s.server_age < p.value())
            return false;
        for (EdgeId e : gt_.in_edges(j)) {
            const Edge& ed = gt_.edge(e);
            const Tail& tl = tail_of(s, ed.from);
            if (tl.age < p.value() + (tl.loc != l ? ed.delay : 0))
                return false;
        }
        return true;
    }

    State place(const State& s, JobId j, Loc l) {
        State next;
        next.done = s.done;
        next.done[j / 64] |= std::uint64_t{1} << (j % 64);
        next.server_age = l == Loc::Server && gt_.ps(j).value() > 0 ? 0 : s.server_age;
        for (const Tail& tl : s.tails) {
            bool open = false;
            for (EdgeId e : gt_.out_edges(tl.job))
                open = open || !has(next.done, gt_.edge(e).to);
            if (open)
                next.tails.push_back(tl);
        }
        if (!gt_.out_edges(j).empty()) {
            auto pos = std::lower_bound(next.tails.begin(), next.tails.end(), j,
                                        [](const Tail& t, JobId id) { return t.job < id; });
            next.tails.insert(pos, Tail{j, l, 0});
        }
        widest_ = std::max(widest_, next.tails.size());
        return next;
    }

    std::vector<State> advance(const std::vector<State>& states, Time t, Time horizon) {
        std::unordered_map<Key, std::size_t, KeyHash> index;
        std::vector<State> out;
        for (const State& s : states) {
            Time need = 0;
            for (JobId j = 0; j < gt_.size(); ++j)
                if (!has(s.done, j))
                    need = std::max(need, after_[j]);
            if (t + need > horizon)
                continue;
            State next = s;
            next.server_age = std::min(s.server_age + 1, server_cap_);
            for (Tail& tl : next.tails)
                tl.age = std::min(tl.age + 1, tail_cap_[tl.job]);
            Key k = key_of(next);
            auto it = index.find(k);
            if (it == index.end()) {
                index.emplace(std::move(k), out.size());
                out.push_back(std::move(next));
            } else if (next.value < out[it->second].value) {
                out[it->second] = std::move(next);
            }
        }
        return out;
    }

    Schedule schedule_from(std::int64_t node) const {
        Schedule s{std::vector<Loc>(gt_.size(), Loc::Server), std::vector<Time>(gt_.size(), 0)};
        for (; node >= 0; node = history_[static_cast<std::size_t>(node)].parent) {
            const Placement& p = history_[static_cast<std::size_t>(node)];
            s.loc[p.job] = p.loc;
            s.completion[p.job] = p.completion;
        }
        return s;
    }

    const TaskGraph& gt_;
    const TaskGraph& g_;
    std::size_t cap_;
    Time server_cap_ = 0;
    std::vector<Time> tail_cap_;
    std::vector<Time> after_;
    std::vector<Placement> history_;
    Cost best_cost_ = kNoCost;
    std::size_t peak_ = 0;
    std::size_t widest_ = 0;
};

Time all_server_makespan(const TaskGraph& g) {
    Time total = 0;
    for (JobId j = 0; j < g.size(); ++j) {
        if (g.ps(j).is_inf())
            return -1;
        total += g.ps(j).value();
    }
    return total;
}

// Any schedule re-timed as early as possible finishes within this.
Time slowest_makespan(const TaskGraph& g) {
    Time total = 0;
    for (JobId j = 0; j < g.size(); ++j) {
        Time slow = 0;
        for (Loc l : {Loc::Server, Loc::Cloud})
            if (g.p(j, l).finite())
                slow = std::max(slow, g.p(j, l).value());
        total += slow;
    }
    for (const auto& e : g.edges())
        total += e.delay;
    return total;
}

}  // namespace

std::optional<DynProgResult> dyn_prog(const TaskGraph& g, Time deadline, std::size_t cap) {
    if (deadline < 0)
        return std::nullopt;
    DynProg dp(g, g, cap);
    auto found = dp.run(std::min(deadline, slowest_makespan(g)), kNoCost, Goal::MinCost);
    if (found.empty())
        return std::nullopt;
    return DynProgResult{found.front().cost, compact(g, found.front().schedule), dp.peak()};
}

std::optional<DynProgResult> dyn_prog_min_makespan(const TaskGraph& g, Cost budget, std::size_t cap) {
    DynProg dp(g, g, cap);
    auto found = dp.run(slowest_makespan(g), budget, Goal::FirstCompletion);
    if (found.empty())
        return std::nullopt;
    return DynProgResult{found.front().cost, compact(g, found.front().schedule), dp.peak()};
}

Schedule unscale_schedule(const TaskGraph& g, const TaskGraph& scaled, const Schedule& s, Ratio rho) {
    const std::size_t n = g.size();
    std::vector<Time> planned(n);
    std::vector<Time> p(n);
    for (JobId j = 0; j < n; ++j) {
        planned[j] = mul_ceil(s.completion[j] - scaled.p(j, s.loc[j]).value(), rho);
        p[j] = g.p(j, s.loc[j]).value();
    }
    std::vector<JobId> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& rank = g.topo_rank();
    std::sort(order.begin(), order.end(),
              [&](JobId a, JobId b) { return std::pair(planned[a], rank[a]) < std::pair(planned[b], rank[b]); });

    std::vector<Time> completion(n, 0);
    Time shift = 0;
    Time server_free = 0;
    for (JobId j : order) {
        Time earliest = s.loc[j] == Loc::Server && p[j] > 0 ? server_free : 0;
        for (EdgeId e : g.in_edges(j)) {
            const Edge& ed = g.edge(e);
            earliest = std::max(earliest, completion[ed.from] + (s.loc[ed.from] != s.loc[j] ? ed.delay : 0));
        }
        Time start = planned[j] + shift;
        if (start < earliest) {
            shift += earliest - start;
            start = earliest;
        }
        completion[j] = start + p[j];
        if (s.loc[j] == Loc::Server && p[j] > 0)
            server_free = completion[j];
    }
    return compact(g, Schedule{s.loc, std::move(completion)});
}

std::optional<SolveOutcome> rounded_min_cost(const TaskGraph& g, Time deadline, Ratio eps, std::size_t cap) {
    const Guarantee guarantee = Guarantee::cost_opt(eps);
    if (auto zero = zero_makespan_schedule(g))
        return make_outcome(g, *zero, guarantee, "general");
    if (deadline <= 0)
        return std::nullopt;
    const Ratio rho = scale_factor(eps, deadline, g.size());
    const TaskGraph gt = scale_graph(g, rho);
    const Time horizon = scale_up_deadline(deadline, rho);
    DynProg dp(gt, g, cap);
    auto found = dp.run(std::min(horizon, slowest_makespan(gt)), kNoCost, Goal::MinCost);
    if (found.empty())
        return std::nullopt;
    return make_outcome(g, unscale_schedule(g, gt, found.front().schedule, rho), guarantee, "general");
}

std::optional<SolveOutcome> fptas_min_makespan(const TaskGraph& g, Cost budget, Ratio eps, std::size_t cap) {
    const Guarantee guarantee = Guarantee::makespan_within(eps);
    if (auto zero = zero_makespan_schedule(g))
        return make_outcome(g, *zero, guarantee, "general");
    if (all_server_makespan(g) < 0) {
        // no cost-free fallback: search directly without scaling
        auto exact = dyn_prog_min_makespan(g, budget, cap);
        if (!exact)
            return std::nullopt;
        return make_outcome(g, exact->schedule, guarantee, "general");
    }
    auto best = halving_search(g, eps, [&](const TaskGraph& gt, Ratio rho, std::optional<Time> deadline) -> std::optional<Schedule> {
        DynProg dp(gt, g, cap);
        Time horizon = deadline ? *deadline : slowest_makespan(gt);
        auto found = dp.run(horizon, budget, Goal::FirstCompletion);
        if (found.empty())
            return std::nullopt;
        return unscale_schedule(g, gt, found.front().schedule, rho);
    });
    if (!best)
        return std::nullopt;
    return make_outcome(g, *best, guarantee, "general");
}

std::vector<RawParetoPoint> approx_pareto_raw(const TaskGraph& g, Ratio alpha, std::size_t cap) {
    std::vector<RawParetoPoint> out;
    if (auto zero = zero_makespan_schedule(g)) {
        out.push_back(RawParetoPoint{ParetoPoint{0, zero->cost(g), *zero}, 0, Ratio{1, 1}});
        return out;
    }
    const Ratio eps = alpha * Ratio{1, 2};
    const Time top = std::max<Time>(slowest_makespan(g), 1);
    for (Time d = top;; d = (d + 1) / 2) {
        const Ratio rho = scale_factor(eps, d, g.size());
        const TaskGraph gt = scale_graph(g, rho);
        DynProg dp(gt, g, cap);
        for (auto& c : dp.run(scale_up_deadline(d, rho), kNoCost, Goal::EveryStep)) {
            Schedule s = unscale_schedule(g, gt, c.schedule, rho);
            out.push_back(RawParetoPoint{ParetoPoint{s.makespan(g), s.cost(g), std::move(s)}, c.t, rho});
        }
        if (d <= 1)
            break;
    }
    return out;
}

std::vector<ParetoPoint> approx_pareto(const TaskGraph& g, Ratio alpha, std::size_t cap) {
    auto raw = approx_pareto_raw(g, alpha, cap);
    std::stable_sort(raw.begin(), raw.end(), [](const RawParetoPoint& a, const RawParetoPoint& b) {
        return std::pair(a.point.makespan, a.point.cost) < std::pair(b.point.makespan, b.point.cost);
    });
    std::vector<ParetoPoint> front;
    for (auto& r : raw)
        if (front.empty() || r.point.cost < front.back().cost)
            front.push_back(std::move(r.point));
    return front;
}

}  // namespace svc
