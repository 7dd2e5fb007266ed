#include "svcsched/extended_chain.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "svcsched/analysis.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/scaling.hpp"
#include "svcsched/tardy.hpp"
#include "svcsched/timing.hpp"

namespace svc {

std::string_view to_string(BlockAssumption a) {
    switch (a) {
    case BlockAssumption::UniformIncoming: return "uniform incoming delays";
    case BlockAssumption::LocallySmall: return "locally small delays";
    case BlockAssumption::BoundedDelay: return "bounded delays";
    }
    return "?";
}

namespace {

constexpr Cost kNoCost = std::numeric_limits<Cost>::max();

Time delay_of(const TaskGraph& g, JobId a, JobId b) { return g.edge(*g.find_edge(a, b)).delay; }

// Block data in the (possibly scaled) time units, with unscaled costs.
struct Block {
    std::vector<JobId> jobs;
    std::vector<ExtTime> ps, pc;
    std::vector<Time> cin, cout;
    std::vector<Cost> cost;  // unscaled cloud cost, kNoCost if the job cannot run there

    std::size_t size() const { return jobs.size(); }
};

Block make_block(const TaskGraph& gt, const TaskGraph& g, JobId u, JobId v, std::span<const JobId> jobs) {
    Block b;
    for (JobId j : jobs) {
        b.jobs.push_back(j);
        b.ps.push_back(gt.ps(j));
        b.pc.push_back(gt.pc(j));
        b.cin.push_back(delay_of(gt, u, j));
        b.cout.push_back(delay_of(gt, j, v));
        b.cost.push_back(g.pc(j).is_inf() ? kNoCost : g.pc(j).value());
    }
    return b;
}

bool fits(ExtTime x, Time limit) { return x.finite() && x.value() <= limit; }

enum class Case { SS, SC, CS, CC };

Loc from_of(Case c) { return c == Case::SS || c == Case::SC ? Loc::Server : Loc::Cloud; }
Loc to_of(Case c) { return c == Case::SS || c == Case::CS ? Loc::Server : Loc::Cloud; }

struct Candidate {
    Cost cost = 0;
    Time window = 0;
    std::vector<JobId> server;
    std::vector<JobId> cloud;
};

// Fit tests: can job k run on the server / in the cloud inside a window of
// length delta for the given case.
bool server_fits(const Block& b, std::size_t k, Case c, Time delta) {
    switch (c) {
    case Case::SS: return fits(b.ps[k], delta);
    case Case::SC: return fits(b.ps[k] + b.cout[k], delta);
    case Case::CS: return fits(b.ps[k] + b.cin[k], delta);
    case Case::CC: return fits(b.ps[k] + b.cin[k] + b.cout[k], delta);
    }
    return false;
}

bool cloud_fits(const Block& b, std::size_t k, Case c, Time delta) {
    switch (c) {
    case Case::SS: return fits(b.pc[k] + b.cin[k] + b.cout[k], delta);
    case Case::SC: return fits(b.pc[k] + b.cin[k], delta);
    case Case::CS: return fits(b.pc[k] + b.cout[k], delta);
    case Case::CC: return fits(b.pc[k], delta);
    }
    return false;
}

// How the cloud-to-cloud case is handled.
enum class CcRule { Stretch, Uniform };

// Cases SS, SC, CS and the two single-problem variants of CC: classify the
// jobs, then let one tardy-jobs instance choose among the free ones.
std::optional<Candidate> evaluate(const Block& b, Case c, Time delta, CcRule rule) {
    Candidate out;
    std::vector<std::size_t> pool;
    std::vector<ExtTime> weight;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const bool s_ok = server_fits(b, k, c, delta);
        const bool c_ok = cloud_fits(b, k, c, delta);
        if (!s_ok && !c_ok)
            return std::nullopt;
        if (!s_ok) {
            out.cost += b.cost[k];
            out.cloud.push_back(b.jobs[k]);
            continue;
        }
        pool.push_back(k);
        weight.push_back(c_ok ? ExtTime(b.cost[k]) : kInf);
    }

    const Time uniform_in = rule == CcRule::Uniform && b.size() > 0 ? b.cin[0] : 0;
    WntjResult res;
    if (c == Case::CS) {
        std::vector<ReleaseJob> jobs;
        for (std::size_t i = 0; i < pool.size(); ++i)
            jobs.push_back(ReleaseJob{b.ps[pool[i]].value(), weight[i], b.cin[pool[i]]});
        res = solve_wntj_release(jobs, delta);
    } else {
        std::vector<TardyJob> jobs;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            std::size_t k = pool[i];
            Time due = delta;
            if (c == Case::SC || c == Case::CC)
                due -= b.cout[k];
            if (c == Case::CC && rule == CcRule::Uniform)
                due -= uniform_in;
            jobs.push_back(TardyJob{b.ps[k].value(), weight[i], due});
        }
        res = solve_wntj(jobs);
    }
    if (!res.feasible())
        return std::nullopt;
    out.cost += res.late_weight.value();

    std::vector<bool> early(pool.size(), false);
    Time biggest_in = 0;
    for (std::size_t i : res.early) {
        early[i] = true;
        out.server.push_back(b.jobs[pool[i]]);
        biggest_in = std::max(biggest_in, b.cin[pool[i]]);
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (!early[i])
            out.cloud.push_back(b.jobs[pool[i]]);
    out.window = delta;
    // wait for the slowest incoming delay before the server part starts
    if (c == Case::CC && rule == CcRule::Stretch)
        out.window += biggest_in;
    return out;
}

struct Split {
    std::vector<std::size_t> server_ok;  // candidates for the server
    Cost cloud_only_cost = 0;
    std::vector<JobId> cloud_only;
};

std::optional<Split> split_cc(const Block& b, Time delta) {
    Split s;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const bool s_ok = server_fits(b, k, Case::CC, delta);
        const bool c_ok = cloud_fits(b, k, Case::CC, delta);
        if (!s_ok && !c_ok)
            return std::nullopt;
        if (s_ok) {
            s.server_ok.push_back(k);
        } else {
            s.cloud_only_cost += b.cost[k];
            s.cloud_only.push_back(b.jobs[k]);
        }
    }
    return s;
}

// Solves a common-deadline knapsack over `pool` (indices into the block) and
// appends the result to `cand`. Returns false when a server-only job misses.
bool fill_middle(const Block& b, const std::vector<std::size_t>& pool, Time room, Time delta, Candidate& cand,
                 std::vector<JobId>& middle) {
    std::vector<TardyJob> jobs;
    for (std::size_t k : pool)
        jobs.push_back(TardyJob{b.ps[k].value(), fits(b.pc[k], delta) ? ExtTime(b.cost[k]) : kInf, room});
    WntjResult res = solve_wntj(jobs);
    if (!res.feasible())
        return false;
    cand.cost += res.late_weight.value();
    std::vector<bool> early(pool.size(), false);
    for (std::size_t i : res.early) {
        early[i] = true;
        middle.push_back(b.jobs[pool[i]]);
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (!early[i])
            cand.cloud.push_back(b.jobs[pool[i]]);
    return true;
}

void keep_cheaper(std::optional<Candidate>& best, Candidate cand) {
    if (!best || cand.cost < best->cost)
        best = std::move(cand);
}

// Locally small delays: only the first and the last server job feel their
// delays, every other server job sits between them.
std::optional<Candidate> evaluate_small(const Block& b, Time delta) {
    auto split = split_cc(b, delta);
    if (!split)
        return std::nullopt;
    const auto& ok = split->server_ok;
    std::optional<Candidate> best;
    auto base = [&] {
        Candidate c;
        c.window = delta;
        c.cost = split->cloud_only_cost;
        c.cloud = split->cloud_only;
        return c;
    };

    // no server job, or exactly one
    for (std::size_t pick = 0; pick <= ok.size(); ++pick) {
        Candidate c = base();
        bool good = true;
        for (std::size_t i = 0; i < ok.size(); ++i) {
            std::size_t k = ok[i];
            if (i == pick) {
                c.server.push_back(b.jobs[k]);
            } else if (fits(b.pc[k], delta)) {
                c.cost += b.cost[k];
                c.cloud.push_back(b.jobs[k]);
            } else {
                good = false;
            }
        }
        if (good)
            keep_cheaper(best, std::move(c));
    }

    for (std::size_t a : ok)
        for (std::size_t w : ok) {
            if (a == w)
                continue;
            Time room = delta - b.cin[a] - b.cout[w] - b.ps[a].value() - b.ps[w].value();
            if (room < 0)
                continue;
            std::vector<std::size_t> pool;
            for (std::size_t k : ok)
                if (k != a && k != w)
                    pool.push_back(k);
            Candidate c = base();
            std::vector<JobId> middle;
            if (!fill_middle(b, pool, room, delta, c, middle))
                continue;
            c.server.push_back(b.jobs[a]);
            c.server.insert(c.server.end(), middle.begin(), middle.end());
            c.server.push_back(b.jobs[w]);
            keep_cheaper(best, std::move(c));
        }
    return best;
}

// Delays bounded by c_max: enumerate the server jobs starting before c_max
// (packed to the left) and those ending after delta - c_max (packed to the
// right). Everything else runs in the delay-free middle window.
std::optional<Candidate> evaluate_bounded(const Block& b, Time delta, Time c_max) {
    auto split = split_cc(b, delta);
    if (!split)
        return std::nullopt;
    std::vector<std::size_t> zero;
    std::vector<std::size_t> positive;
    for (std::size_t k : split->server_ok)
        (b.ps[k].value() == 0 ? zero : positive).push_back(k);

    std::optional<Candidate> best;
    std::vector<bool> used(b.size(), false);
    std::vector<std::size_t> head;
    std::vector<std::size_t> tail;

    auto finish = [&](Time head_end, Time tail_start) {
        std::vector<std::size_t> pool;
        for (std::size_t k : positive)
            if (!used[k])
                pool.push_back(k);
        Time lo = std::max(head_end, c_max);
        Time hi = std::min(tail_start, delta - c_max);
        Candidate c;
        c.window = delta;
        c.cost = split->cloud_only_cost;
        c.cloud = split->cloud_only;
        std::vector<JobId> middle;
        if (!fill_middle(b, pool, hi - lo, delta, c, middle))
            return;
        for (std::size_t k : zero)
            c.server.push_back(b.jobs[k]);
        for (std::size_t k : head)
            c.server.push_back(b.jobs[k]);
        c.server.insert(c.server.end(), middle.begin(), middle.end());
        for (auto it = tail.rbegin(); it != tail.rend(); ++it)
            c.server.push_back(b.jobs[*it]);
        keep_cheaper(best, std::move(c));
    };

    auto grow_tail = [&](auto&& self, Time head_end, Time tail_start) -> void {
        finish(head_end, tail_start);
        for (std::size_t k : positive) {
            if (used[k])
                continue;
            Time end = std::min(tail_start, delta - b.cout[k]);
            Time start = end - b.ps[k].value();
            if (end <= delta - c_max || start < b.cin[k] || start < head_end)
                continue;
            used[k] = true;
            tail.push_back(k);
            self(self, head_end, start);
            tail.pop_back();
            used[k] = false;
        }
    };

    auto grow_head = [&](auto&& self, Time head_end) -> void {
        grow_tail(grow_tail, head_end, delta);
        for (std::size_t k : positive) {
            if (used[k])
                continue;
            Time start = std::max(head_end, b.cin[k]);
            Time end = start + b.ps[k].value();
            if (start >= c_max || end + b.cout[k] > delta)
                continue;
            used[k] = true;
            head.push_back(k);
            self(self, end);
            head.pop_back();
            used[k] = false;
        }
    };
    grow_head(grow_head, 0);
    return best;
}

enum class BlockMode { Approx, Special };

// Upper end for the window length: beyond it every job can take its cheapest
// option, so larger windows cannot be cheaper.
Time window_bound(const Block& b) {
    Time total = 0;
    Time in = 0;
    Time out = 0;
    Time cloud = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (b.ps[k].finite())
            total += b.ps[k].value();
        in = std::max(in, b.cin[k]);
        out = std::max(out, b.cout[k]);
        ExtTime span = b.pc[k] + b.cin[k] + b.cout[k];
        if (span.finite())
            cloud = std::max(cloud, span.value());
    }
    return total + in + out + cloud;
}

void pareto_filter(std::vector<ExtensionEntry>& entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const ExtensionEntry& a, const ExtensionEntry& b) {
        return std::tie(a.from, a.to, a.dt, a.cost) < std::tie(b.from, b.to, b.dt, b.cost);
    });
    std::vector<ExtensionEntry> kept;
    for (auto& e : entries) {
        if (!kept.empty() && kept.back().from == e.from && kept.back().to == e.to && kept.back().cost <= e.cost)
            continue;
        kept.push_back(std::move(e));
    }
    entries = std::move(kept);
}

std::vector<ExtensionEntry> extensions(const TaskGraph& gt, const TaskGraph& g, JobId u, JobId v,
                                       std::span<const JobId> block, Time limit, BlockMode mode,
                                       std::optional<BlockAssumption> assumption, Time c_max) {
    std::vector<ExtensionEntry> out;
    const Cost v_cost = g.pc(v).is_inf() ? kNoCost : g.pc(v).value();

    if (block.empty()) {
        const Time delay = delay_of(gt, u, v);
        for (Loc from : {Loc::Server, Loc::Cloud})
            for (Loc to : {Loc::Server, Loc::Cloud}) {
                ExtTime p = gt.p(v, to);
                if (p.is_inf())
                    continue;
                ExtensionEntry e;
                e.from = from;
                e.to = to;
                e.window = from != to ? delay : 0;
                e.dt = e.window + p.value();
                e.cost = to == Loc::Cloud ? v_cost : 0;
                out.push_back(std::move(e));
            }
        pareto_filter(out);
        return out;
    }

    const Block b = make_block(gt, g, u, v, block);
    const Time top = std::min(limit, window_bound(b));
    for (Case c : {Case::SS, Case::SC, Case::CS, Case::CC}) {
        const ExtTime pv = gt.p(v, to_of(c));
        if (pv.is_inf())
            continue;
        for (Time delta = 0; delta <= top; ++delta) {
            std::optional<Candidate> cand;
            if (c != Case::CC || mode == BlockMode::Approx)
                cand = evaluate(b, c, delta, CcRule::Stretch);
            else if (assumption == BlockAssumption::UniformIncoming)
                cand = evaluate(b, c, delta, CcRule::Uniform);
            else if (assumption == BlockAssumption::LocallySmall)
                cand = evaluate_small(b, delta);
            else
                cand = evaluate_bounded(b, delta, c_max);
            if (!cand)
                continue;
            ExtensionEntry e;
            e.from = from_of(c);
            e.to = to_of(c);
            e.window = cand->window;
            e.dt = cand->window + pv.value();
            e.cost = cand->cost + (e.to == Loc::Cloud ? v_cost : 0);
            e.server_jobs = std::move(cand->server);
            e.cloud_jobs = std::move(cand->cloud);
            out.push_back(std::move(e));
        }
    }
    pareto_filter(out);
    return out;
}

struct Cell {
    Cost cost = kNoCost;
    Time prev_t = 0;
    Loc prev_loc = Loc::Server;
    std::size_t entry = 0;
};

struct Solver {
    const TaskGraph& g;
    ShapeClass shape;
    Cost budget;
    Ratio eps;
    ExtChainOptions opt;
    std::vector<std::optional<BlockAssumption>> assumptions;

    // One sweep for makespan estimate T (unscaled units).
    std::optional<Schedule> run(Time estimate) const {
        Ratio rho{1, 1};
        if (opt.scale) {
            const Ratio third = eps * Ratio{1, 3};
            rho = scale_factor(third, estimate, g.size(), 1);
        }
        const TaskGraph gt = rho == Ratio{1, 1} ? g : scale_graph(g, rho);
        const Time est = scale_up_deadline(estimate, rho);
        const Time limit = opt.special ? est : 2 * est;
        const std::size_t steps = shape.spine.size();

        std::vector<std::vector<ExtensionEntry>> ext(steps);
        for (std::size_t i = 1; i < steps; ++i)
            ext[i] = extensions(gt, g, shape.spine[i - 1], shape.spine[i], shape.blocks[i - 1], est,
                                opt.special ? BlockMode::Special : BlockMode::Approx, assumptions[i - 1], opt.c_max);

        const std::size_t width = static_cast<std::size_t>(limit) + 1;
        std::vector<std::array<std::vector<Cell>, 2>> layer(steps);
        for (auto& l : layer)
            l = {std::vector<Cell>(width), std::vector<Cell>(width)};
        layer[0][0][0].cost = 0;
        for (std::size_t i = 1; i < steps; ++i) {
            for (int from = 0; from < 2; ++from)
                for (std::size_t t = 0; t < width; ++t) {
                    const Cost have = layer[i - 1][from][t].cost;
                    if (have == kNoCost)
                        continue;
                    for (std::size_t k = 0; k < ext[i].size(); ++k) {
                        const auto& e = ext[i][k];
                        if (static_cast<int>(e.from) != from || e.cost == kNoCost)
                            continue;
                        const std::size_t nt = t + static_cast<std::size_t>(e.dt);
                        const Cost nc = have + e.cost;
                        if (nt >= width || nc > budget)
                            continue;
                        Cell& cell = layer[i][static_cast<int>(e.to)][nt];
                        if (nc < cell.cost)
                            cell = Cell{nc, static_cast<Time>(t), static_cast<Loc>(from), k};
                    }
                }
        }

        const auto& last = layer[steps - 1][0];
        std::size_t t = 0;
        while (t < width && last[t].cost == kNoCost)
            ++t;
        if (t == width)
            return std::nullopt;

        std::vector<Loc> loc(g.size(), Loc::Server);
        std::vector<std::vector<JobId>> order_parts(steps);
        Loc here = Loc::Server;
        for (std::size_t i = steps - 1; i > 0; --i) {
            const Cell& cell = layer[i][static_cast<int>(here)][t];
            const auto& e = ext[i][cell.entry];
            loc[shape.spine[i]] = here;
            for (JobId j : e.cloud_jobs)
                loc[j] = Loc::Cloud;
            order_parts[i] = e.server_jobs;
            if (here == Loc::Server)
                order_parts[i].push_back(shape.spine[i]);
            t = static_cast<std::size_t>(cell.prev_t);
            here = cell.prev_loc;
        }
        std::vector<JobId> order;
        for (const auto& part : order_parts)
            order.insert(order.end(), part.begin(), part.end());
        return timed_schedule(g, loc, order);
    }
};

Time makespan_upper_bound(const TaskGraph& g) {
    Time total = 0;
    for (JobId j = 0; j < g.size(); ++j) {
        // any assignment within the budget, timed without idling, fits
        Time slow = 0;
        for (Loc l : {Loc::Server, Loc::Cloud})
            if (g.p(j, l).finite())
                slow = std::max(slow, g.p(j, l).value());
        total += slow;
    }
    for (const auto& e : g.edges())
        total += e.delay;
    return std::max<Time>(total, 1);
}

std::optional<SolveOutcome> search(const TaskGraph& g, Cost budget, Ratio eps, const ExtChainOptions& opt,
                                   Guarantee guarantee) {
    ShapeClass shape = classify_shape(g);
    if (!shape.is_extended_chain())
        throw ShapeMismatch("engine needs an extended chain, got " + std::string(to_string(shape.tag)));
    if (auto zero = zero_makespan_schedule(g))
        return make_outcome(g, *zero, guarantee, "extchain");

    std::vector<std::optional<BlockAssumption>> assumptions(shape.blocks.size());
    if (opt.special)
        for (std::size_t i = 0; i < shape.blocks.size(); ++i) {
            if (shape.blocks[i].empty())
                continue;
            JobId u = shape.spine[i];
            JobId v = shape.spine[i + 1];
            assumptions[i] = block_assumption(g, u, v, shape.blocks[i], opt.c_max);
            if (!assumptions[i])
                throw AssumptionViolated("block between '" + g.name(u) + "' and '" + g.name(v) +
                                         "' satisfies none of the assumptions");
        }

    Solver solver{g, std::move(shape), budget, eps, opt, std::move(assumptions)};
    std::optional<Schedule> best;
    auto attempt = [&](Time estimate) {
        auto s = solver.run(estimate);
        if (s && (!best || std::pair(s->makespan(g), s->cost(g)) < std::pair(best->makespan(g), best->cost(g))))
            best = s;
        return s.has_value();
    };

    Time hi = makespan_upper_bound(g);
    if (!attempt(hi))
        return std::nullopt;
    Time lo = 0;  // treated as failing
    while (hi - lo > 1) {
        Time mid = lo + (hi - lo) / 2;
        if (attempt(mid))
            hi = mid;
        else
            lo = mid;
    }
    return make_outcome(g, *best, guarantee, "extchain");
}

}  // namespace

std::optional<BlockAssumption> block_assumption(const TaskGraph& g, JobId u, JobId v, std::span<const JobId> block,
                                                Time c_max) {
    if (block.empty())
        return BlockAssumption::UniformIncoming;
    const Block b = make_block(g, g, u, v, block);
    if (std::all_of(b.cin.begin(), b.cin.end(), [&](Time c) { return c == b.cin[0]; }))
        return BlockAssumption::UniformIncoming;
    ExtTime smallest = kInf;
    Time largest = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        smallest = std::min({smallest, b.ps[k], b.pc[k]});
        largest = std::max({largest, b.cin[k], b.cout[k]});
    }
    if (smallest >= ExtTime(largest))
        return BlockAssumption::LocallySmall;
    if (largest <= c_max)
        return BlockAssumption::BoundedDelay;
    return std::nullopt;
}

std::vector<ExtensionEntry> build_extensions(const TaskGraph& g, JobId u, JobId v, std::span<const JobId> block,
                                             Time estimate) {
    return extensions(g, g, u, v, block, estimate, BlockMode::Approx, std::nullopt, 0);
}

std::optional<SolveOutcome> approx_makespan_extended(const TaskGraph& g, Cost budget, Ratio eps,
                                                     const ExtChainOptions& opt) {
    ExtChainOptions o = opt;
    if (o.special)
        return fptas_extended_special(g, budget, eps, o.c_max, o.scale);
    return search(g, budget, eps, o, Guarantee::factor_of(Ratio{2, 1} + eps, Ratio{1, 1}, "makespan factor"));
}

std::optional<SolveOutcome> fptas_extended_special(const TaskGraph& g, Cost budget, Ratio eps, Time c_max,
                                                   bool scale) {
    ExtChainOptions o{scale, true, c_max};
    return search(g, budget, eps, o, Guarantee::makespan_within(eps));
}

}  // namespace svc
