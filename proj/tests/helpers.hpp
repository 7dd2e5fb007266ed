#pragma once

#include <vector>

#include "svcsched/generators.hpp"
#include "svcsched/graph.hpp"
#include "svcsched/validate.hpp"

namespace svctest {

using namespace svc;

// chain s -> 1 -> 2 -> t, p_s = (2, 3), p_c = (1, 1), delays 1, 2, 1
inline TaskGraph e1() {
    GraphBuilder b;
    b.add_source();
    b.add_job("1", 2, 1);
    b.add_job("2", 3, 1);
    b.add_sink();
    b.add_edge("s", "1", 1);
    b.add_edge("1", "2", 2);
    b.add_edge("2", "t", 1);
    return b.build();
}

// a:4 -> c:2 and b:5 in parallel, identical machines, no delays
inline TaskGraph e8() {
    GraphBuilder b;
    b.add_source();
    b.add_job("a", 4, 4);
    b.add_job("b", 5, 5);
    b.add_job("c", 2, 2);
    b.add_sink();
    b.add_edge("s", "a");
    b.add_edge("s", "b");
    b.add_edge("a", "c");
    b.add_edge("c", "t");
    b.add_edge("b", "t");
    return b.build();
}

// s -> {a, b} -> t with the given sizes and delays
inline TaskGraph diamond(Time p = 1, Time c = 1) {
    GraphBuilder b;
    b.add_source();
    b.add_job("a", p, p);
    b.add_job("b", p, p);
    b.add_sink();
    for (const char* m : {"a", "b"}) {
        b.add_edge("s", m, c);
        b.add_edge(m, "t", c);
    }
    return b.build();
}

inline TaskGraph with_jobs(const TaskGraph& g, std::vector<Job> jobs) {
    return TaskGraph(std::move(jobs), g.edges(), g.source(), g.sink());
}

// Random instance of a random shape with total job count in [3, max_jobs];
// occasionally pins a middle job to the server with an infinite cloud time.
inline TaskGraph random_instance(Rng& rng, std::size_t max_jobs, Time max_p = 5, Time max_c = 3,
                                 bool allow_pinned = true) {
    static constexpr RandomShape shapes[] = {RandomShape::Chain, RandomShape::FullyParallel,
                                             RandomShape::ExtendedChain, RandomShape::LayeredDag};
    RandomSpec spec;
    spec.shape = shapes[rng.uniform(0, 3)];
    spec.n = static_cast<std::size_t>(rng.uniform(3, static_cast<std::int64_t>(max_jobs)));
    spec.max_p = max_p;
    spec.max_c = max_c;
    spec.seed = rng.next();
    TaskGraph g = gen_random(spec).graph;
    if (!allow_pinned)
        return g;
    std::vector<Job> jobs = g.jobs();
    bool changed = false;
    for (JobId j : g.middle_jobs())
        if (rng.chance(1, 12)) {
            jobs[j].pc = kInf;
            changed = true;
        }
    return changed ? with_jobs(g, std::move(jobs)) : g;
}

inline Time sum_ps(const TaskGraph& g) {
    Time s = 0;
    for (JobId j = 0; j < g.size(); ++j)
        if (g.ps(j).finite())
            s += g.ps(j).value();
    return s;
}

inline Cost sum_pc(const TaskGraph& g) {
    Cost s = 0;
    for (JobId j : g.middle_jobs())
        if (g.pc(j).finite())
            s += g.pc(j).value();
    return s;
}

// Schedule is valid and its reported numbers match recomputation.
inline bool sound(const TaskGraph& g, const Schedule& s, Time makespan, Cost cost) {
    auto r = validate_schedule(g, s);
    return r.valid && r.makespan == makespan && r.cost == cost;
}

}  // namespace svctest
