#include "doctest.h"
#include "helpers.hpp"
#include "svcsched/analysis.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/io.hpp"
#include "svcsched/scaling.hpp"
#include "svcsched/timing.hpp"
#include "svcsched/validate.hpp"

using namespace svc;
using namespace svctest;

namespace {

Schedule sched(const TaskGraph& g, std::initializer_list<std::tuple<const char*, Loc, Time>> rows) {
    Schedule s{std::vector<Loc>(g.size(), Loc::Server), std::vector<Time>(g.size(), 0)};
    for (auto [name, loc, c] : rows) {
        JobId j = *g.find(name);
        s.loc[j] = loc;
        s.completion[j] = c;
    }
    return s;
}

bool has_kind(const ValidationReport& r, ViolationKind k) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST_CASE("extended time saturates and orders infinity last") {
    CHECK((ExtTime(3) + ExtTime(4)) == ExtTime(7));
    CHECK((ExtTime(3) + kInf).is_inf());
    CHECK(ExtTime(1'000'000) < kInf);
    CHECK(kInf.str() == "inf");
}

TEST_CASE("ratios parse and round exactly") {
    CHECK(Ratio::parse("0.25").reduced() == Ratio{1, 4});
    CHECK(Ratio::parse("3/6").reduced() == Ratio{1, 2});
    CHECK(Ratio::parse("2").reduced() == Ratio{2, 1});
    CHECK_THROWS(Ratio::parse("1/0"));
    CHECK(mul_floor(7, Ratio{1, 2}) == 3);
    CHECK(mul_ceil(7, Ratio{1, 2}) == 4);
    CHECK(mul_ceil(6, Ratio{1, 2}) == 3);
    CHECK(le_scaled(5, 4, Ratio{5, 4}));
    CHECK_FALSE(le_scaled(6, 4, Ratio{5, 4}));
}

TEST_CASE("smallest legal instance validates") {
    GraphBuilder b;
    b.add_source();
    b.add_job("j", 2, 3);
    b.add_sink();
    b.add_edge("s", "j");
    b.add_edge("j", "t");
    CHECK(validate_instance(b.build()).valid);
}

TEST_CASE("two sources are reported") {
    GraphBuilder b;
    b.add_source();
    b.add_job("x", 1, 1);
    b.add_job("j", 1, 1);
    b.add_sink();
    b.add_edge("s", "j");
    b.add_edge("x", "j");
    b.add_edge("j", "t");
    auto r = validate_instance(b.build());
    REQUIRE_FALSE(r.valid);
    CHECK(std::any_of(r.problems.begin(), r.problems.end(),
                      [](const std::string& p) { return p.find("two sources") != std::string::npos; }));
}

TEST_CASE("finite cloud time on the source is rejected") {
    GraphBuilder b;
    JobId s = b.add_job("s", 0, 4);
    b.set_source(s);
    b.add_job("j", 1, 1);
    b.add_sink();
    b.add_edge("s", "j");
    b.add_edge("j", "t");
    CHECK_FALSE(validate_instance(b.build()).valid);
}

TEST_CASE("cycles and unreachable jobs are rejected") {
    std::vector<Job> jobs{{"s", 0, kInf}, {"a", 1, 1}, {"b", 1, 1}, {"t", 0, kInf}};
    TaskGraph cyc(jobs, {{0, 1, 0}, {1, 2, 0}, {2, 1, 0}, {2, 3, 0}}, 0, 3);
    CHECK_FALSE(validate_instance(cyc).valid);
}

TEST_CASE("schedule validation on E1") {
    TaskGraph g = e1();
    SUBCASE("both on the server back to back") {
        auto r = validate_schedule(g, sched(g, {{"s", Loc::Server, 0}, {"1", Loc::Server, 2}, {"2", Loc::Server, 5}, {"t", Loc::Server, 5}}));
        CHECK(r.valid);
        CHECK(r.makespan == 5);
        CHECK(r.cost == 0);
    }
    SUBCASE("overlapping server jobs") {
        auto r = validate_schedule(g, sched(g, {{"s", Loc::Server, 0}, {"1", Loc::Server, 2}, {"2", Loc::Server, 4}, {"t", Loc::Server, 4}}));
        CHECK(has_kind(r, ViolationKind::ServerOverlap));
    }
    SUBCASE("delay ignored across contexts") {
        auto r = validate_schedule(g, sched(g, {{"s", Loc::Server, 0}, {"1", Loc::Cloud, 1}, {"2", Loc::Cloud, 2}, {"t", Loc::Server, 3}}));
        CHECK(has_kind(r, ViolationKind::DelayViolated));
    }
    SUBCASE("both in the cloud") {
        auto r = validate_schedule(g, sched(g, {{"s", Loc::Server, 0}, {"1", Loc::Cloud, 2}, {"2", Loc::Cloud, 3}, {"t", Loc::Server, 4}}));
        CHECK(r.valid);
        CHECK(r.cost == 2);
    }
    SUBCASE("sink in the cloud") {
        auto r = validate_schedule(g, sched(g, {{"s", Loc::Server, 0}, {"1", Loc::Server, 2}, {"2", Loc::Server, 5}, {"t", Loc::Cloud, 5}}));
        CHECK(has_kind(r, ViolationKind::BadLocation));
    }
}

TEST_CASE("zero-makespan check") {
    auto two_jobs = [](Time delay, bool joined) {
        GraphBuilder b;
        b.add_source();
        b.add_job("1", 0, 7);
        b.add_job("2", 5, 0);
        b.add_sink();
        b.add_edge("s", "1");
        if (joined) {
            b.add_edge("1", "2", delay);
        } else {
            b.add_edge("s", "2");
            b.add_edge("1", "t");
        }
        b.add_edge("2", "t");
        return b.build();
    };
    TaskGraph free = two_jobs(0, false);
    auto z = zero_makespan_schedule(free);
    REQUIRE(z.has_value());
    CHECK(z->makespan(free) == 0);
    CHECK(z->cost(free) == 0);
    CHECK(validate_schedule(free, *z).valid);

    CHECK_FALSE(zero_makespan_schedule(two_jobs(1, true)).has_value());

    GraphBuilder b;
    b.add_source();
    b.add_sink();
    b.add_edge("s", "t");
    CHECK(zero_makespan_schedule(b.build()).has_value());
}

TEST_CASE("cut width phi") {
    CHECK(compute_phi(e1()) == 1);
    CHECK(compute_phi(diamond()) == 2);
    GraphBuilder b;
    b.add_source();
    b.add_sink();
    for (const char* m : {"a", "b", "c"}) {
        b.add_job(m, 1, 1);
        b.add_edge("s", m);
        b.add_edge(m, "t");
    }
    CHECK(compute_phi(b.build()) == 3);
}

TEST_CASE("longest chain") {
    TaskGraph g = e8();
    ChainPath c = longest_chain(g);
    CHECK(c.length == 6);
    std::vector<std::string> names;
    for (JobId j : c.jobs)
        names.push_back(g.name(j));
    CHECK(names == std::vector<std::string>{"s", "a", "c", "t"});
    CHECK(longest_chain(e1()).length == 5);
    CHECK(longest_chain(diamond(0, 1)).length == 0);
}

TEST_CASE("shape classification") {
    CHECK(classify_shape(e1()).tag == ShapeTag::Chain);
    CHECK(classify_shape(diamond()).tag == ShapeTag::FullyParallel);

    // spine s -> m -> t with a two-job block on each side
    GraphBuilder b;
    b.add_source();
    b.add_job("m", 1, 1);
    b.add_sink();
    for (const char* x : {"a", "b"}) {
        b.add_job(x, 1, 1);
        b.add_edge("s", x);
        b.add_edge(x, "m");
    }
    for (const char* x : {"c", "d"}) {
        b.add_job(x, 1, 1);
        b.add_edge("m", x);
        b.add_edge(x, "t");
    }
    ShapeClass sc = classify_shape(b.build());
    CHECK(sc.tag == ShapeTag::ExtendedChain);
    CHECK(sc.spine.size() == 3);
    CHECK(std::count_if(sc.blocks.begin(), sc.blocks.end(), [](const auto& bl) { return !bl.empty(); }) == 2);

    GraphBuilder chord;
    chord.add_source();
    chord.add_job("a", 1, 1);
    chord.add_job("b", 1, 1);
    chord.add_sink();
    chord.add_edge("s", "a");
    chord.add_edge("s", "b");
    chord.add_edge("a", "t");
    chord.add_edge("b", "t");
    chord.add_edge("a", "b");
    CHECK(classify_shape(chord.build()).tag == ShapeTag::General);
}

TEST_CASE("timing respects a server order listed against index order") {
    // the server runs b before a although a has the smaller index
    GraphBuilder b;
    b.add_source();
    b.add_job("a", 2, 2);
    b.add_job("b", 3, 3);
    b.add_sink();
    for (const char* m : {"a", "b"}) {
        b.add_edge("s", m);
        b.add_edge(m, "t");
    }
    TaskGraph g = b.build();
    std::vector<Loc> loc(g.size(), Loc::Server);
    std::vector<JobId> order{*g.find("b"), *g.find("a")};
    Schedule s = timed_schedule(g, loc, order);
    CHECK(s.completion[*g.find("b")] == 3);
    CHECK(s.completion[*g.find("a")] == 5);
    CHECK(validate_schedule(g, s).valid);
    CHECK(compact(g, s) == s);
}

TEST_CASE("list scheduling yields valid schedules") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        TaskGraph g = random_instance(rng, 9, 5, 3, false);
        std::vector<Loc> loc(g.size(), Loc::Server);
        for (JobId j : g.middle_jobs())
            if (rng.chance(1, 2))
                loc[j] = Loc::Cloud;
        Schedule s = list_schedule(g, loc);
        CHECK(validate_schedule(g, s).valid);
    }
}

TEST_CASE("scaling") {
    CHECK(scale_factor(Ratio{1, 2}, 8, 4) == Ratio{1, 1});
    Ratio rho = scale_factor(Ratio{1, 1}, 100, 5).reduced();
    CHECK(rho == Ratio{10, 1});
    TaskGraph s = scale_graph(e1(), Ratio{2, 1});
    CHECK(s.ps(*s.find("2")) == ExtTime(1));
    CHECK(s.pc(s.source()).is_inf());
    CHECK(scale_up_deadline(5, Ratio{2, 1}) == 3);
}

TEST_CASE("instance and schedule JSON round trip") {
    TaskGraph g = e1();
    Json j = instance_to_json(g);
    TaskGraph back = instance_from_json(j);
    CHECK(back.size() == g.size());
    CHECK(back.pc(back.source()).is_inf());
    CHECK(dump(instance_to_json(back)) == dump(j));

    Schedule s = sched(g, {{"s", Loc::Server, 0}, {"1", Loc::Cloud, 2}, {"2", Loc::Cloud, 3}, {"t", Loc::Server, 4}});
    CHECK(schedule_from_json(g, schedule_to_json(g, s)) == s);
    CHECK_THROWS_AS(instance_from_json(parse_json_text(R"({"jobs": 3})")), InputError);
}
