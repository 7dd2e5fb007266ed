#include "svcsched/validate.hpp"

#include <algorithm>
#include <set>

namespace svc {

std::string_view to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::ServerOverlap: return "ServerOverlap";
    case ViolationKind::PrecedenceViolated: return "PrecedenceViolated";
    case ViolationKind::DelayViolated: return "DelayViolated";
    case ViolationKind::BadLocation: return "BadLocation";
    }
    return "?";
}

InstanceReport validate_instance(const TaskGraph& g) {
    InstanceReport r;
    auto fail = [&](std::string msg) {
        r.valid = false;
        r.problems.push_back(std::move(msg));
    };
    const std::size_t n = g.size();
    const JobId s = g.source();
    const JobId t = g.sink();
    if (s == t)
        fail("source and sink are the same job");
    if (!g.acyclic())
        fail("graph has a cycle");

    std::set<std::pair<JobId, JobId>> seen;
    for (const auto& e : g.edges()) {
        if (e.from == e.to)
            fail("self-loop on '" + g.name(e.from) + "'");
        else if (!seen.emplace(e.from, e.to).second)
            fail("duplicate edge '" + g.name(e.from) + "' -> '" + g.name(e.to) + "'");
    }

    std::size_t sources = 0;
    std::size_t sinks = 0;
    for (JobId j = 0; j < n; ++j) {
        if (g.in_edges(j).empty())
            ++sources;
        if (g.out_edges(j).empty())
            ++sinks;
    }
    if (sources > 1)
        fail("two sources: more than one job without predecessors");
    if (sinks > 1)
        fail("two sinks: more than one job without successors");
    if (!g.in_edges(s).empty())
        fail("source '" + g.name(s) + "' has predecessors");
    if (!g.out_edges(t).empty())
        fail("sink '" + g.name(t) + "' has successors");

    for (JobId j : {s, t}) {
        if (g.ps(j) != ExtTime(0))
            fail("'" + g.name(j) + "' must have server time 0");
        if (!g.pc(j).is_inf())
            fail("'" + g.name(j) + "' must have cloud time inf");
    }

    // reachability from the source and to the sink
    auto sweep = [&](JobId start, bool forward) {
        std::vector<bool> hit(n, false);
        std::vector<JobId> stack{start};
        hit[start] = true;
        while (!stack.empty()) {
            JobId v = stack.back();
            stack.pop_back();
            for (EdgeId e : forward ? g.out_edges(v) : g.in_edges(v)) {
                JobId w = forward ? g.edge(e).to : g.edge(e).from;
                if (!hit[w]) {
                    hit[w] = true;
                    stack.push_back(w);
                }
            }
        }
        return hit;
    };
    auto from_s = sweep(s, true);
    auto to_t = sweep(t, false);
    for (JobId j = 0; j < n; ++j) {
        if (!from_s[j])
            fail("'" + g.name(j) + "' is not reachable from the source");
        if (!to_t[j])
            fail("sink is not reachable from '" + g.name(j) + "'");
    }
    return r;
}

ValidationReport validate_schedule(const TaskGraph& g, const Schedule& s) {
    ValidationReport r;
    auto add = [&](ViolationKind k, std::vector<JobId> jobs, std::string detail) {
        r.valid = false;
        r.violations.push_back(Violation{k, std::move(jobs), std::move(detail)});
    };
    const std::size_t n = g.size();
    if (s.loc.size() != n || s.completion.size() != n) {
        add(ViolationKind::BadLocation, {}, "schedule does not cover every job");
        return r;
    }
    for (JobId j : {g.source(), g.sink()})
        if (s.loc[j] != Loc::Server)
            add(ViolationKind::BadLocation, {j}, "'" + g.name(j) + "' must run on the server");

    std::vector<Time> p(n, 0);
    for (JobId j = 0; j < n; ++j) {
        ExtTime pj = g.p(j, s.loc[j]);
        if (pj.is_inf()) {
            add(ViolationKind::BadLocation, {j},
                "'" + g.name(j) + "' cannot run on the " + std::string(to_string(s.loc[j])));
            continue;
        }
        p[j] = pj.value();
        if (s.completion[j] - p[j] < 0)
            add(ViolationKind::PrecedenceViolated, {j}, "'" + g.name(j) + "' starts before time 0");
    }
    if (!r.valid)
        return r;

    std::vector<JobId> on_server;
    for (JobId j = 0; j < n; ++j)
        if (s.loc[j] == Loc::Server && p[j] > 0)
            on_server.push_back(j);
    std::sort(on_server.begin(), on_server.end(), [&](JobId a, JobId b) {
        return std::pair(s.completion[a] - p[a], a) < std::pair(s.completion[b] - p[b], b);
    });
    // Sorted by start, so any overlap shows up against the earlier job with
    // the latest completion.
    for (std::size_t k = 1, latest = 0; k < on_server.size(); ++k) {
        JobId a = on_server[latest];
        JobId b = on_server[k];
        if (s.completion[b] - p[b] < s.completion[a])
            add(ViolationKind::ServerOverlap, {a, b},
                "'" + g.name(a) + "' and '" + g.name(b) + "' overlap on the server");
        if (s.completion[b] > s.completion[a])
            latest = k;
    }

    for (const auto& e : g.edges()) {
        const Time start = s.completion[e.to] - p[e.to];
        const bool cross = s.loc[e.from] != s.loc[e.to];
        if (start < s.completion[e.from])
            add(ViolationKind::PrecedenceViolated, {e.from, e.to},
                "'" + g.name(e.to) + "' starts before '" + g.name(e.from) + "' completes");
        else if (cross && start < s.completion[e.from] + e.delay)
            add(ViolationKind::DelayViolated, {e.from, e.to},
                "'" + g.name(e.to) + "' starts " + std::to_string(start) + ", before '" + g.name(e.from) +
                    "' completes plus delay " + std::to_string(e.delay) + " (" +
                    std::to_string(s.completion[e.from] + e.delay) + ")");
    }
    r.makespan = s.completion[g.sink()];
    r.cost = s.cost(g);
    return r;
}

}  // namespace svc
