#include "doctest.h"
#include "helpers.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/oracle.hpp"

using namespace svc;
using namespace svctest;

TEST_CASE("oracle decisions on E1") {
    TaskGraph g = e1();
    auto all_server = oracle_decide(g, 5, 0);
    REQUIRE(all_server.has_value());
    CHECK(all_server->makespan(g) == 5);
    CHECK(all_server->loc[*g.find("1")] == Loc::Server);
    CHECK(all_server->loc[*g.find("2")] == Loc::Server);

    auto cloud = oracle_decide(g, 4, 2);
    REQUIRE(cloud.has_value());
    CHECK(cloud->loc[*g.find("1")] == Loc::Cloud);
    CHECK(cloud->completion[*g.find("1")] == 2);
    CHECK(cloud->completion[*g.find("2")] == 3);
    CHECK(cloud->makespan(g) == 4);
    CHECK(cloud->cost(g) == 2);

    CHECK_FALSE(oracle_decide(g, 3, 99).has_value());
}

TEST_CASE("oracle objectives on E1") {
    Oracle o(e1());
    CHECK(o.min_cost(5)->cost(e1()) == 0);
    CHECK(o.min_cost(4)->cost(e1()) == 2);
    CHECK(o.min_makespan(1)->makespan(e1()) == 5);
    CHECK(o.min_makespan(2)->makespan(e1()) == 4);
}

TEST_CASE("oracle Pareto fronts") {
    auto front = oracle_pareto(e1());
    REQUIRE(front.size() == 2);
    CHECK(front[0].makespan == 4);
    CHECK(front[0].cost == 2);
    CHECK(front[1].makespan == 5);
    CHECK(front[1].cost == 0);
    for (const auto& p : front)
        CHECK(sound(e1(), p.witness, p.makespan, p.cost));

    GraphBuilder b;
    b.add_source();
    b.add_sink();
    b.add_edge("s", "t");
    auto trivial = oracle_pareto(b.build());
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].makespan == 0);
    CHECK(trivial[0].cost == 0);

    // two unit jobs with unit delays: any cloud use costs time as well
    auto par = oracle_pareto(diamond());
    REQUIRE(par.size() == 1);
    CHECK(par[0].makespan == 2);
    CHECK(par[0].cost == 0);
}

TEST_CASE("oracle explores server orders") {
    // b must run before a on the server for the cloud job c to start early
    GraphBuilder b;
    b.add_source();
    b.add_job("a", 3, kInf);
    b.add_job("b", 1, kInf);
    b.add_job("c", kInf, 1);
    b.add_sink();
    b.add_edge("s", "a");
    b.add_edge("s", "b");
    b.add_edge("b", "c", 0);
    b.add_edge("a", "t");
    b.add_edge("c", "t", 3);
    TaskGraph g = b.build();
    auto best = Oracle(g).min_makespan(10);
    REQUIRE(best.has_value());
    CHECK(best->makespan(g) == 5);
    CHECK(validate_schedule(g, *best).valid);
}

TEST_CASE("oracle refuses large instances") {
    GraphBuilder b;
    b.add_source();
    b.add_sink();
    for (int i = 0; i < 12; ++i) {
        std::string n = "j" + std::to_string(i);
        b.add_job(n, 1, 1);
        b.add_edge("s", n);
        b.add_edge(n, "t");
    }
    CHECK_THROWS_AS(Oracle(b.build()), InstanceTooLarge);
}
