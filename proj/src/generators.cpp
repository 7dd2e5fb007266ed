#include "svcsched/generators.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "svcsched/errors.hpp"

namespace svc {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo)
        return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0)
        return static_cast<std::int64_t>(next());
    // reject the short top range so every value is equally likely
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = next();
    while (x >= limit)
        x = next();
    return lo + static_cast<std::int64_t>(x % span);
}

bool Rng::chance(std::int64_t num, std::int64_t den) { return uniform(0, den - 1) < num; }

GeneratedInstance gen_from_knapsack(const KnapsackSpec& k) {
    Time total_value = 0;
    for (const auto& item : k.items)
        total_value += item.value;
    if (k.threshold > total_value)
        throw InputError("value threshold exceeds the total value");
    GraphBuilder b;
    JobId prev = b.add_source();
    for (std::size_t i = 0; i < k.items.size(); ++i) {
        const auto& item = k.items[i];
        JobId j = b.add_job("item" + std::to_string(i + 1), item.weight + item.value, item.value);
        b.add_edge(prev, j);
        prev = j;
    }
    JobId t = b.add_sink();
    b.add_edge(prev, t);
    GeneratedInstance out{b.build(), total_value + k.capacity, total_value - k.threshold};
    out.meta["from"] = "knapsack";
    return out;
}

GeneratedInstance gen_from_partition(const std::vector<Time>& elements) {
    GraphBuilder b;
    JobId s = b.add_source();
    JobId t = b.add_sink();
    Time total = 0;
    if (elements.empty())
        b.add_edge(s, t);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        JobId j = b.add_job("e" + std::to_string(i + 1), elements[i], elements[i]);
        b.add_edge(s, j);
        b.add_edge(j, t);
        total += elements[i];
    }
    GeneratedInstance out{b.build(), total / 2, total / 2};
    out.meta["from"] = "partition";
    out.meta["odd_total"] = total % 2 != 0;
    return out;
}

CnfSpec parse_dimacs(std::string_view text) {
    CnfSpec f;
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<int> pending;
    bool header = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == 'c' || first[0] == '%')
            continue;
        if (first == "p") {
            std::string kind;
            std::size_t declared = 0;
            if (!(ls >> kind >> f.num_vars >> declared) || kind != "cnf")
                throw InputError("bad DIMACS header: " + line);
            header = true;
            continue;
        }
        if (!header)
            throw InputError("DIMACS clause before the header");
        std::istringstream all(line);
        int lit = 0;
        while (all >> lit) {
            if (lit == 0) {
                if (pending.size() != 3)
                    throw InputError("clause with " + std::to_string(pending.size()) + " literals; exactly 3 needed");
                f.clauses.push_back({pending[0], pending[1], pending[2]});
                pending.clear();
            } else {
                if (std::abs(lit) > f.num_vars)
                    throw InputError("literal " + std::to_string(lit) + " out of range");
                pending.push_back(lit);
            }
        }
    }
    if (!header)
        throw InputError("missing DIMACS header");
    if (!pending.empty())
        throw InputError("unterminated clause");
    return f;
}

SatInstance gen_unit_from_3sat(const CnfSpec& f) {
    const int m = f.num_vars;
    const int n = static_cast<int>(f.clauses.size());
    if (m < 1)
        throw InputError("formula needs at least one variable");
    for (const auto& c : f.clauses)
        for (int lit : c)
            if (lit == 0 || std::abs(lit) > m)
                throw InputError("literal out of range in clause");

    const Time d = 12 + m + n;
    const Time len = d - 2;
    GraphBuilder b;
    SatGadget gad;
    Json roles = Json::object();
    auto job = [&](const std::string& name, const char* role) {
        roles[name] = role;
        return b.add_job(name, 1, 1);
    };
    const JobId src = b.add_source();
    const JobId snk = b.add_sink();

    for (Time i = 1; i <= len; ++i) {
        gad.anchor_a.push_back(job("a" + std::to_string(i), "anchor"));
        gad.anchor_b.push_back(job("b" + std::to_string(i), "anchor"));
    }
    auto a = [&](Time i) { return gad.anchor_a[static_cast<std::size_t>(i - 1)]; };
    auto bb = [&](Time i) { return gad.anchor_b[static_cast<std::size_t>(i - 1)]; };
    b.add_edge(src, a(1), 1);
    b.add_edge(src, bb(1), 1);
    for (Time i = 1; i < len; ++i) {
        b.add_edge(a(i), a(i + 1), 1);
        b.add_edge(bb(i), bb(i + 1), 1);
        b.add_edge(a(i), bb(i + 1), 1);
        b.add_edge(bb(i), a(i + 1), 1);
    }
    b.add_edge(a(len), snk, 1);
    b.add_edge(bb(len), snk, 1);

    for (int i = 1; i <= m; ++i) {
        JobId pos = job("x" + std::to_string(i), "variable");
        JobId neg = job("nx" + std::to_string(i), "variable");
        for (JobId v : {pos, neg}) {
            b.add_edge(a(1 + i), v, 1);
            b.add_edge(v, a(5 + i), 1);
        }
        gad.variables.emplace_back(pos, neg);
    }

    for (int p = 1; p <= n; ++p) {
        const std::string tag = std::to_string(p);
        JobId clause = job("C" + tag, "clause");
        b.add_edge(a(7 + m + p), clause, 1);
        b.add_edge(clause, a(9 + m + p), 1);
        gad.clauses.push_back(clause);
        std::array<JobId, 3> lits{};
        std::array<std::vector<JobId>, 3> chains;
        for (int q = 0; q < 3; ++q) {
            const int lit = f.clauses[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(q)];
            const int i = std::abs(lit);
            const std::string ltag = tag + "_" + std::to_string(q + 1);
            lits[q] = job("L" + ltag, "literal");
            b.add_edge(lits[q], clause, 1);
            const JobId var = lit > 0 ? gad.variables[static_cast<std::size_t>(i - 1)].first
                                      : gad.variables[static_cast<std::size_t>(i - 1)].second;
            const int chain_len = 1 + (m - i) + p;
            JobId prev = var;
            for (int k = 1; k <= chain_len; ++k) {
                JobId c = job("k" + ltag + "_" + std::to_string(k), "connection");
                b.add_edge(prev, c, 1);
                chains[q].push_back(c);
                prev = c;
            }
            b.add_edge(prev, lits[q], 1);
            b.add_edge(a(3 + i), chains[q].front(), 1);
            b.add_edge(chains[q].back(), a(6 + m + p), 1);
        }
        gad.literals.push_back(lits);
        gad.chains.push_back(std::move(chains));
    }

    TaskGraph g = b.build();
    const Cost budget = static_cast<Cost>(g.size()) - (2 + m + n);
    SatInstance out{GeneratedInstance{std::move(g), d, budget}, std::move(gad)};
    out.instance.meta["from"] = "3sat";
    out.instance.meta["variables"] = m;
    out.instance.meta["clauses"] = n;
    out.instance.meta["roles"] = std::move(roles);
    return out;
}

std::vector<std::string> check_sat_gadget(const SatInstance& s, const CnfSpec& f) {
    std::vector<std::string> problems;
    const TaskGraph& g = s.instance.graph;
    const SatGadget& gad = s.gadget;
    const Time m = f.num_vars;
    const Time n = static_cast<Time>(f.clauses.size());
    const Time d = s.instance.deadline;
    auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

    if (d != 12 + m + n)
        fail("deadline " + std::to_string(d) + " differs from 12 + m + n");
    const Time anchors = static_cast<Time>(gad.anchor_a.size() + gad.anchor_b.size());
    if (anchors != 2 * (d - 2))
        fail("anchor chain has " + std::to_string(anchors) + " jobs, expected " + std::to_string(2 * (d - 2)));
    if (s.instance.budget != static_cast<Cost>(g.size()) - (2 + m + n))
        fail("budget differs from |J| - (2 + m + n)");
    for (JobId j : g.middle_jobs())
        if (g.ps(j) != ExtTime(1) || g.pc(j) != ExtTime(1))
            fail("job " + g.name(j) + " is not unit");
    for (const Edge& e : g.edges())
        if (e.delay != 1)
            fail("edge " + g.name(e.from) + " -> " + g.name(e.to) + " has delay " + std::to_string(e.delay));

    for (std::size_t i = 0; i + 1 < gad.anchor_a.size(); ++i) {
        const JobId a0 = gad.anchor_a[i], a1 = gad.anchor_a[i + 1];
        const JobId b0 = gad.anchor_b[i], b1 = gad.anchor_b[i + 1];
        for (auto [u, v] : {std::pair{a0, a1}, std::pair{b0, b1}, std::pair{a0, b1}, std::pair{b0, a1}})
            if (!g.find_edge(u, v))
                fail("anchor edge " + g.name(u) + " -> " + g.name(v) + " missing");
    }

    // anchor index k (1-based) of a job, if it is some a_k
    std::vector<Time> anchor_index(g.size(), 0);
    for (std::size_t i = 0; i < gad.anchor_a.size(); ++i)
        anchor_index[gad.anchor_a[i]] = static_cast<Time>(i + 1);

    for (std::size_t p = 0; p < gad.chains.size(); ++p) {
        for (std::size_t q = 0; q < 3; ++q) {
            const auto& chain = gad.chains[p][q];
            const std::string where = "clause " + std::to_string(p + 1) + " literal " + std::to_string(q + 1);
            if (chain.empty()) {
                fail(where + ": empty connection chain");
                continue;
            }
            Time before = 0, after = 0;
            for (EdgeId e : g.in_edges(chain.front()))
                before = std::max(before, anchor_index[g.edge(e).from]);
            for (EdgeId e : g.out_edges(chain.back()))
                after = std::max(after, anchor_index[g.edge(e).to]);
            if (before == 0 || after == 0) {
                fail(where + ": chain not attached to the anchor chain");
                continue;
            }
            // a_before completes at before + 1; a_after starts at after
            const Time window = after - (before + 1);
            const Time slack = window - static_cast<Time>(chain.size());
            if (slack != 1)
                fail(where + ": connection chain has slack " + std::to_string(slack));
            for (std::size_t k = 0; k + 1 < chain.size(); ++k)
                if (!g.find_edge(chain[k], chain[k + 1]))
                    fail(where + ": connection chain broken");
            if (!g.find_edge(chain.back(), gad.literals[p][q]))
                fail(where + ": chain does not reach its literal job");
        }
        if (p < gad.clauses.size())
            for (JobId lit : gad.literals[p])
                if (!g.find_edge(lit, gad.clauses[p]))
                    fail("literal job " + g.name(lit) + " does not feed its clause");
    }
    return problems;
}

std::string_view to_string(RandomShape s) {
    switch (s) {
        case RandomShape::Chain: return "chain";
        case RandomShape::FullyParallel: return "parallel";
        case RandomShape::ExtendedChain: return "extchain";
        case RandomShape::LayeredDag: return "layered";
        case RandomShape::UnitDag: return "unit";
    }
    return "?";
}

RandomShape parse_random_shape(std::string_view name) {
    for (auto s : {RandomShape::Chain, RandomShape::FullyParallel, RandomShape::ExtendedChain, RandomShape::LayeredDag,
                   RandomShape::UnitDag})
        if (to_string(s) == name)
            return s;
    throw InputError("unknown shape '" + std::string(name) + "'");
}

GeneratedInstance gen_random(const RandomSpec& r) {
    if (r.n < 2)
        throw InputError("a random instance needs at least two jobs");
    Rng rng(r.seed);
    const bool unit = r.shape == RandomShape::UnitDag;
    GraphBuilder b;
    const JobId src = b.add_source();
    const JobId snk = b.add_sink();
    const std::size_t k = r.n - 2;
    auto new_job = [&](std::size_t idx) {
        const std::string name = "j" + std::to_string(idx + 1);
        if (unit)
            return b.add_job(name, 1, 1);
        return b.add_job(name, rng.uniform(0, r.max_p), rng.uniform(0, r.max_p));
    };
    auto delay = [&] { return unit ? Time{1} : rng.uniform(0, r.max_c); };

    std::vector<JobId> jobs;
    for (std::size_t i = 0; i < k; ++i)
        jobs.push_back(new_job(i));

    switch (r.shape) {
        case RandomShape::Chain: {
            JobId prev = src;
            for (JobId j : jobs) {
                b.add_edge(prev, j, delay());
                prev = j;
            }
            b.add_edge(prev, snk, delay());
            break;
        }
        case RandomShape::FullyParallel: {
            if (jobs.empty())
                b.add_edge(src, snk, delay());
            for (JobId j : jobs) {
                b.add_edge(src, j, delay());
                b.add_edge(j, snk, delay());
            }
            break;
        }
        case RandomShape::ExtendedChain: {
            JobId spine = src;
            std::size_t next = 0;
            while (true) {
                const std::size_t left = k - next;
                const auto width = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(std::min<std::size_t>(left, 3))));
                std::vector<JobId> block(jobs.begin() + static_cast<std::ptrdiff_t>(next),
                                         jobs.begin() + static_cast<std::ptrdiff_t>(next + width));
                next += width;
                const JobId to = next < k ? jobs[next++] : snk;
                if (block.empty())
                    b.add_edge(spine, to, delay());
                for (JobId j : block) {
                    b.add_edge(spine, j, delay());
                    b.add_edge(j, to, delay());
                }
                if (to == snk)
                    break;
                spine = to;
            }
            break;
        }
        case RandomShape::LayeredDag:
        case RandomShape::UnitDag: {
            // random layer per job, then edges only from earlier layers
            std::vector<std::int64_t> layer(k);
            const std::int64_t depth = std::max<std::int64_t>(1, static_cast<std::int64_t>(k) / 2);
            for (auto& l : layer)
                l = rng.uniform(0, depth - 1);
            std::vector<bool> has_in(k, false), has_out(k, false);
            for (std::size_t v = 0; v < k; ++v) {
                std::vector<std::size_t> earlier;
                for (std::size_t u = 0; u < k; ++u)
                    if (layer[u] < layer[v])
                        earlier.push_back(u);
                for (std::size_t u : earlier)
                    if (rng.chance(1, 3)) {
                        b.add_edge(jobs[u], jobs[v], delay());
                        has_in[v] = has_out[u] = true;
                    }
                if (!has_in[v] && !earlier.empty() && rng.chance(2, 3)) {
                    std::size_t u = earlier[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(earlier.size()) - 1))];
                    b.add_edge(jobs[u], jobs[v], delay());
                    has_in[v] = has_out[u] = true;
                }
            }
            for (std::size_t v = 0; v < k; ++v) {
                if (!has_in[v])
                    b.add_edge(src, jobs[v], delay());
                if (!has_out[v])
                    b.add_edge(jobs[v], snk, delay());
            }
            if (k == 0)
                b.add_edge(src, snk, delay());
            break;
        }
    }
    GeneratedInstance out{b.build(), 0, 0};
    out.meta["from"] = "random";
    out.meta["shape"] = std::string(to_string(r.shape));
    out.meta["seed"] = r.seed;
    return out;
}

}  // namespace svc
