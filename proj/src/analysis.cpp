#include "svcsched/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "svcsched/errors.hpp"

namespace svc {

std::string_view to_string(ShapeTag t) {
    switch (t) {
    case ShapeTag::Chain: return "Chain";
    case ShapeTag::FullyParallel: return "FullyParallel";
    case ShapeTag::ExtendedChain: return "ExtendedChain";
    case ShapeTag::General: return "General";
    }
    return "?";
}

std::optional<Schedule> zero_makespan_schedule(const TaskGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : g.edges())
        if (e.delay > 0)
            parent[root(e.from)] = root(e.to);

    std::vector<bool> server_ok(n, true);
    std::vector<bool> cloud_ok(n, true);
    for (JobId j = 0; j < n; ++j) {
        auto r = root(j);
        if (g.ps(j) != ExtTime(0))
            server_ok[r] = false;
        if (g.pc(j) != ExtTime(0))
            cloud_ok[r] = false;
    }
    Schedule s{std::vector<Loc>(n), std::vector<Time>(n, 0)};
    for (JobId j = 0; j < n; ++j) {
        auto r = root(j);
        if (server_ok[r])
            s.loc[j] = Loc::Server;
        else if (cloud_ok[r])
            s.loc[j] = Loc::Cloud;
        else
            return std::nullopt;
    }
    return s;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
    std::size_t operator()(const Bits& b) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : b)
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

bool test(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

}  // namespace

std::size_t compute_phi(const TaskGraph& g, std::size_t cap) {
    const std::size_t n = g.size();
    Bits start((n + 63) / 64, 0);
    set(start, g.source());

    std::unordered_set<Bits, BitsHash> seen{start};
    std::vector<Bits> frontier{start};
    std::size_t best = 0;
    while (!frontier.empty()) {
        Bits cur = std::move(frontier.back());
        frontier.pop_back();
        std::size_t crossing = 0;
        for (const auto& e : g.edges())
            if (test(cur, e.from) && !test(cur, e.to))
                ++crossing;
        best = std::max(best, crossing);

        for (JobId j = 0; j < n; ++j) {
            if (test(cur, j))
                continue;
            bool ready = true;
            for (EdgeId e : g.in_edges(j))
                ready = ready && test(cur, g.edge(e).from);
            if (!ready)
                continue;
            Bits next = cur;
            set(next, j);
            if (seen.insert(next).second) {
                if (seen.size() > cap)
                    throw StateSpaceExceeded("phi enumeration exceeded " + std::to_string(cap) + " job sets");
                frontier.push_back(std::move(next));
            }
        }
    }
    return best;
}

ChainPath longest_chain(const TaskGraph& g) {
    const std::size_t n = g.size();
    std::vector<Time> best(n, -1);
    std::vector<JobId> via(n, n);
    best[g.source()] = 0;
    for (JobId j : g.topo_order()) {
        if (g.ps(j).is_inf())
            throw InputError("longest chain needs finite server times");
        if (best[j] < 0)
            continue;
        for (EdgeId e : g.out_edges(j)) {
            JobId k = g.edge(e).to;
            Time cand = best[j] + g.ps(k).value();
            if (cand > best[k]) {
                best[k] = cand;
                via[k] = j;
            }
        }
    }
    ChainPath out;
    out.length = best[g.sink()] + g.ps(g.source()).value();
    for (JobId j = g.sink(); j != n; j = via[j])
        out.jobs.push_back(j);
    std::reverse(out.jobs.begin(), out.jobs.end());
    return out;
}

namespace {

std::vector<JobId> succs(const TaskGraph& g, JobId j) {
    std::vector<JobId> out;
    for (EdgeId e : g.out_edges(j))
        out.push_back(g.edge(e).to);
    return out;
}

std::vector<JobId> preds(const TaskGraph& g, JobId j) {
    std::vector<JobId> out;
    for (EdgeId e : g.in_edges(j))
        out.push_back(g.edge(e).from);
    return out;
}

std::optional<ShapeClass> extended_decomposition(const TaskGraph& g) {
    ShapeClass sc;
    sc.tag = ShapeTag::ExtendedChain;
    JobId cur = g.source();
    sc.spine.push_back(cur);
    std::size_t covered = 1;
    while (cur != g.sink()) {
        auto outs = succs(g, cur);
        if (outs.empty())
            return std::nullopt;
        if (outs.size() == 1) {
            JobId v = outs[0];
            if (g.in_edges(v).size() != 1)
                return std::nullopt;
            sc.blocks.emplace_back();
            sc.spine.push_back(v);
            ++covered;
            cur = v;
            continue;
        }
        std::optional<JobId> next;
        for (JobId s : outs) {
            if (s == g.sink() || g.in_edges(s).size() != 1 || g.out_edges(s).size() != 1)
                return std::nullopt;
            JobId v = g.edge(g.out_edges(s)[0]).to;
            if (next && *next != v)
                return std::nullopt;
            next = v;
        }
        auto back = preds(g, *next);
        std::sort(back.begin(), back.end());
        std::sort(outs.begin(), outs.end());
        if (back != outs)
            return std::nullopt;
        sc.blocks.push_back(outs);
        sc.spine.push_back(*next);
        covered += outs.size() + 1;
        cur = *next;
    }
    if (covered != g.size())
        return std::nullopt;
    return sc;
}

}  // namespace

ShapeClass classify_shape(const TaskGraph& g) {
    auto dec = extended_decomposition(g);
    if (!dec)
        return ShapeClass{};
    const bool has_block =
        std::any_of(dec->blocks.begin(), dec->blocks.end(), [](const auto& b) { return !b.empty(); });
    if (!has_block)
        dec->tag = ShapeTag::Chain;
    else if (dec->spine.size() == 2)
        dec->tag = ShapeTag::FullyParallel;
    return *dec;
}

}  // namespace svc
