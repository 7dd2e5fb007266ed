#include "doctest.h"
#include "helpers.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/extended_chain.hpp"
#include "svcsched/oracle.hpp"

using namespace svc;
using namespace svctest;

namespace {

// s -> {block} -> t where block job i has sizes p[i] and delays cin[i], cout[i]
TaskGraph one_block(std::vector<Time> p, std::vector<Time> cin, std::vector<Time> cout) {
    GraphBuilder b;
    b.add_source();
    b.add_sink();
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::string n = "x" + std::to_string(i + 1);
        b.add_job(n, p[i], p[i]);
        b.add_edge("s", n, cin[i]);
        b.add_edge(n, "t", cout[i]);
    }
    return b.build();
}

std::vector<JobId> block_of(const TaskGraph& g) { return g.middle_jobs(); }

}  // namespace

TEST_CASE("direct server-to-cloud extension") {
    TaskGraph g = e1();
    JobId u = *g.find("1"), v = *g.find("2");
    auto ext = build_extensions(g, u, v, {}, 20);
    auto it = std::find_if(ext.begin(), ext.end(),
                           [](const ExtensionEntry& e) { return e.from == Loc::Server && e.to == Loc::Cloud; });
    REQUIRE(it != ext.end());
    CHECK(it->dt == 1 + 2);
    CHECK(it->cost == 1);
}

TEST_CASE("single-job block with large delays must stay on the server") {
    TaskGraph g = one_block({1}, {5}, {5});
    auto ext = build_extensions(g, g.source(), g.sink(), block_of(g), 20);
    std::vector<ExtensionEntry> ss;
    for (const auto& e : ext)
        if (e.from == Loc::Server && e.to == Loc::Server)
            ss.push_back(e);
    REQUIRE(ss.size() >= 1);
    CHECK(std::none_of(ss.begin(), ss.end(), [](const ExtensionEntry& e) { return e.window < 1; }));
    auto one = std::find_if(ss.begin(), ss.end(), [](const ExtensionEntry& e) { return e.window == 1; });
    REQUIRE(one != ss.end());
    CHECK(one->cost == 0);
    CHECK(one->server_jobs.size() == 1);
    CHECK(one->cloud_jobs.empty());
}

TEST_CASE("block assumptions") {
    TaskGraph uniform = one_block({1, 1}, {3, 3}, {1, 4});
    CHECK(block_assumption(uniform, uniform.source(), uniform.sink(), block_of(uniform), 0) ==
          BlockAssumption::UniformIncoming);

    TaskGraph small = one_block({5, 5}, {1, 2}, {2, 3});
    CHECK(block_assumption(small, small.source(), small.sink(), block_of(small), 0) == BlockAssumption::LocallySmall);

    TaskGraph bounded = one_block({1, 1}, {1, 2}, {2, 2});
    CHECK(block_assumption(bounded, bounded.source(), bounded.sink(), block_of(bounded), 2) ==
          BlockAssumption::BoundedDelay);
    CHECK_FALSE(block_assumption(bounded, bounded.source(), bounded.sink(), block_of(bounded), 1).has_value());
    CHECK_THROWS_AS(fptas_extended_special(bounded, 2, Ratio{1, 2}, 1), AssumptionViolated);

    TaskGraph zero = one_block({2, 3}, {0, 0}, {0, 0});
    CHECK(block_assumption(zero, zero.source(), zero.sink(), block_of(zero), 0).has_value());
}

TEST_CASE("E1 as an extended chain") {
    TaskGraph g = e1();
    auto r = approx_makespan_extended(g, 2, Ratio{3, 10});
    REQUIRE(r.has_value());
    CHECK(r->cost <= 2);
    CHECK(10 * r->makespan <= 23 * 4);
    CHECK(sound(g, r->schedule, r->makespan, r->cost));
    CHECK(r->engine == "extchain");
}

TEST_CASE("general graphs are refused") {
    GraphBuilder b;
    b.add_source();
    b.add_job("a", 1, 1);
    b.add_job("b", 1, 1);
    b.add_sink();
    b.add_edge("s", "a");
    b.add_edge("s", "b");
    b.add_edge("a", "b");
    b.add_edge("a", "t");
    b.add_edge("b", "t");
    CHECK_THROWS_AS(approx_makespan_extended(b.build(), 5, Ratio{1, 2}), ShapeMismatch);
}

TEST_CASE("on pure chains the approximation is within 1 + eps") {
    Rng rng(23);
    const Ratio eps{1, 2};
    for (int i = 0; i < 60; ++i) {
        TaskGraph g = gen_random({RandomShape::Chain, static_cast<std::size_t>(rng.uniform(3, 8)), 6, 3, rng.next()}).graph;
        Oracle o(g);
        for (Cost b : {Cost{0}, sum_pc(g) / 2, sum_pc(g)}) {
            auto opt = o.min_makespan(b);
            auto r = approx_makespan_extended(g, b, eps);
            REQUIRE(r.has_value() == opt.has_value());
            if (!r)
                continue;
            CHECK(r->cost <= b);
            CHECK(le_scaled(r->makespan, opt->makespan(g), Ratio{1, 1} + eps));
        }
    }
}

TEST_CASE("zero-delay blocks are solved exactly without scaling") {
    Rng rng(29);
    for (int i = 0; i < 60; ++i) {
        TaskGraph src = gen_random({RandomShape::ExtendedChain, static_cast<std::size_t>(rng.uniform(4, 9)), 6, 0, rng.next()}).graph;
        Oracle o(src);
        for (Cost b : {Cost{0}, sum_pc(src) / 3, sum_pc(src)}) {
            auto opt = o.min_makespan(b);
            auto r = fptas_extended_special(src, b, Ratio{1, 2}, 0, false);
            REQUIRE(r.has_value() == opt.has_value());
            if (!r)
                continue;
            CHECK(r->cost <= b);
            CHECK(r->makespan == opt->makespan(src));
            CHECK(sound(src, r->schedule, r->makespan, r->cost));
        }
    }
}

TEST_CASE("generous budgets stay within 2 + eps of the optimum") {
    Rng rng(31);
    for (int i = 0; i < 60; ++i) {
        TaskGraph g = gen_random({RandomShape::ExtendedChain, static_cast<std::size_t>(rng.uniform(4, 9)), 6, 3, rng.next()}).graph;
        auto opt = Oracle(g).min_makespan(sum_pc(g));
        auto r = approx_makespan_extended(g, sum_pc(g), Ratio{1, 4});
        REQUIRE(r.has_value());
        CHECK(4 * r->makespan <= 9 * opt->makespan(g));
    }
}
