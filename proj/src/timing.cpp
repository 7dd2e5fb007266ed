#include "svcsched/timing.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace svc {

namespace {

Time size_at(const TaskGraph& g, JobId j, Loc l) {
    ExtTime p = g.p(j, l);
    if (p.is_inf())
        throw std::logic_error("job '" + g.name(j) + "' has infinite time at its location");
    return p.value();
}

}  // namespace

Schedule timed_schedule(const TaskGraph& g, std::span<const Loc> loc, std::span<const JobId> server_order) {
    const std::size_t n = g.size();
    std::vector<Time> p(n);
    for (JobId j = 0; j < n; ++j)
        p[j] = size_at(g, j, loc[j]);

    // Extra arcs: consecutive positive-length server jobs.
    std::vector<JobId> next_on_server(n, n);
    std::vector<bool> ordered(n, false);
    JobId prev = n;
    for (JobId j : server_order) {
        if (loc[j] != Loc::Server)
            throw std::logic_error("server order contains cloud job '" + g.name(j) + "'");
        if (p[j] == 0)
            continue;
        ordered[j] = true;
        if (prev != n)
            next_on_server[prev] = j;
        prev = j;
    }
    std::vector<std::size_t> indeg(n, 0);
    for (JobId j = 0; j < n; ++j) {
        if (loc[j] == Loc::Server && p[j] > 0 && !ordered[j])
            throw std::logic_error("server job '" + g.name(j) + "' missing from server order");
        indeg[j] += g.in_edges(j).size();
        if (next_on_server[j] != n)
            ++indeg[next_on_server[j]];
    }

    std::vector<Time> c(n);
    std::vector<Time> release(n, 0);
    std::queue<JobId> ready;
    for (JobId j = 0; j < n; ++j)
        if (indeg[j] == 0)
            ready.push(j);
    std::size_t done = 0;
    while (!ready.empty()) {
        JobId j = ready.front();
        ready.pop();
        ++done;
        c[j] = release[j] + p[j];
        auto relax = [&](JobId k, Time earliest_start) {
            release[k] = std::max(release[k], earliest_start);
            if (--indeg[k] == 0)
                ready.push(k);
        };
        for (EdgeId e : g.out_edges(j)) {
            const auto& ed = g.edge(e);
            relax(ed.to, c[j] + (loc[j] != loc[ed.to] ? ed.delay : 0));
        }
        if (next_on_server[j] != n)
            relax(next_on_server[j], c[j]);
    }
    if (done != n)
        throw std::logic_error("server order contradicts precedence");
    return Schedule{std::vector<Loc>(loc.begin(), loc.end()), std::move(c)};
}

Schedule list_schedule(const TaskGraph& g, std::span<const Loc> loc) {
    const std::size_t n = g.size();
    const auto& rank = g.topo_rank();
    std::vector<Time> p(n);
    for (JobId j = 0; j < n; ++j)
        p[j] = size_at(g, j, loc[j]);

    std::vector<std::size_t> missing(n);
    std::vector<Time> release(n, 0);
    std::vector<Time> c(n, 0);
    std::vector<JobId> now;  // ready jobs that need no server slot
    std::vector<JobId> waiting;  // ready positive-length server jobs
    for (JobId j = 0; j < n; ++j) {
        missing[j] = g.in_edges(j).size();
        if (missing[j] == 0)
            (loc[j] == Loc::Server && p[j] > 0 ? waiting : now).push_back(j);
    }
    Time server_free = 0;
    std::size_t done = 0;
    auto finish = [&](JobId j) {
        ++done;
        for (EdgeId e : g.out_edges(j)) {
            const auto& ed = g.edge(e);
            release[ed.to] = std::max(release[ed.to], c[j] + (loc[j] != loc[ed.to] ? ed.delay : 0));
            if (--missing[ed.to] == 0)
                (loc[ed.to] == Loc::Server && p[ed.to] > 0 ? waiting : now).push_back(ed.to);
        }
    };
    while (done < n) {
        if (!now.empty()) {
            JobId j = now.back();
            now.pop_back();
            c[j] = release[j] + p[j];
            finish(j);
            continue;
        }
        if (waiting.empty())
            throw std::logic_error("graph has a cycle");
        auto best = std::min_element(waiting.begin(), waiting.end(), [&](JobId a, JobId b) {
            return std::pair(std::max(release[a], server_free), rank[a]) <
                   std::pair(std::max(release[b], server_free), rank[b]);
        });
        JobId j = *best;
        waiting.erase(best);
        c[j] = std::max(release[j], server_free) + p[j];
        server_free = c[j];
        finish(j);
    }
    return Schedule{std::vector<Loc>(loc.begin(), loc.end()), std::move(c)};
}

std::vector<JobId> server_order_of(const TaskGraph& g, const Schedule& s) {
    std::vector<JobId> order;
    for (JobId j = 0; j < g.size(); ++j)
        if (s.loc[j] == Loc::Server && g.ps(j).finite() && g.ps(j).value() > 0)
            order.push_back(j);
    std::sort(order.begin(), order.end(), [&](JobId a, JobId b) {
        return std::pair(s.completion[a], g.topo_rank()[a]) < std::pair(s.completion[b], g.topo_rank()[b]);
    });
    return order;
}

Schedule compact(const TaskGraph& g, const Schedule& s) {
    auto order = server_order_of(g, s);
    return timed_schedule(g, s.loc, order);
}

}  // namespace svc
