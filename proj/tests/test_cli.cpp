#include <cstdlib>
#include <random>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "svcsched/cli.hpp"
#include "svcsched/io.hpp"

using namespace svc;
using namespace svctest;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("svcsched_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string file(const std::string& name, const std::string& text) const {
        std::string p = (dir / name).string();
        write_text_file(p, text);
        return p;
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("solve picks an engine and the output verifies") {
    Scratch s;
    const std::string inst = s.file("e1.json", dump(instance_to_json(e1())));
    Run r = cli({"solve", "--engine", "auto", "--mode", "mincost", "--deadline", "4", inst});
    REQUIRE(r.code == kExitOk);
    Json j = parse_json_text(r.out);
    CHECK(j["cost"] == 2);
    CHECK(j["meta"]["engine"] == "chain");
    CHECK(j["meta"]["guarantee"]["kind"] == "exact");

    const std::string sched = s.file("out.json", r.out);
    Run v = cli({"verify", inst, sched});
    CHECK(v.code == kExitOk);

    Run again = cli({"solve", "--engine", "auto", "--mode", "mincost", "--deadline", "4", inst});
    CHECK(again.out == r.out);
}

TEST_CASE("every engine's output verifies") {
    Scratch s;
    const std::string inst = s.file("e1.json", dump(instance_to_json(e1())));
    for (const char* engine : {"oracle", "chain", "extchain", "general"}) {
        Run r = cli({"solve", "--engine", engine, "--mode", "minmakespan", "--budget", "2", "--epsilon", "0.5", inst});
        REQUIRE(r.code == kExitOk);
        CHECK(cli({"verify", inst, s.file(std::string(engine) + ".json", r.out)}).code == kExitOk);
    }
}

TEST_CASE("verify reports a delay violation") {
    Scratch s;
    const std::string inst = s.file("e1.json", dump(instance_to_json(e1())));
    const std::string bad = s.file("bad.json", R"({"assignment": [
        {"job": "s", "loc": "server", "completion": 0},
        {"job": "1", "loc": "cloud", "completion": 1},
        {"job": "2", "loc": "cloud", "completion": 2},
        {"job": "t", "loc": "server", "completion": 3}]})");
    Run v = cli({"verify", inst, bad});
    CHECK(v.code == kExitInfeasible);
    CHECK(v.out.find("DelayViolated") != std::string::npos);

    const std::string lying = s.file("lying.json", R"({"assignment": [
        {"job": "s", "loc": "server", "completion": 0},
        {"job": "1", "loc": "server", "completion": 2},
        {"job": "2", "loc": "server", "completion": 5},
        {"job": "t", "loc": "server", "completion": 5}], "makespan": 4, "cost": 0})");
    CHECK(cli({"verify", inst, lying}).code == kExitInfeasible);
}

TEST_CASE("analyze") {
    Scratch s;
    const std::string inst = s.file("e1.json", dump(instance_to_json(e1())));
    Run r = cli({"analyze", inst});
    REQUIRE(r.code == kExitOk);
    Json j = parse_json_text(r.out);
    CHECK(j["shape"] == "Chain");
    CHECK(j["phi"] == 1);
    CHECK(j["longest_chain"]["length"] == 5);
    CHECK(j["zero_makespan"] == false);
}

TEST_CASE("exit codes") {
    Scratch s;
    const std::string inst = s.file("e1.json", dump(instance_to_json(e1())));
    CHECK(cli({"solve", "--mode", "mincost", "--deadline", "3", inst}).code == kExitInfeasible);
    CHECK(cli({"solve", "--mode", "mincost", inst}).code == kExitInput);
    CHECK(cli({"solve", "--mode", "mincost", "--deadline", "4", s.path("missing.json")}).code == kExitInput);
    CHECK(cli({"solve", "--engine", "warp", "--mode", "mincost", "--deadline", "4", inst}).code == kExitInput);
    CHECK(cli({"solve", "--engine", "parallel", "--mode", "mincost", "--deadline", "4", inst}).code == kExitInput);
    CHECK(cli({"solve", "--mode", "mincost", "--deadline", "4", "--epsilon", "x", inst}).code == kExitInput);
    CHECK(cli({"frobnicate"}).code == kExitInput);
    CHECK(cli({"verify", inst, s.file("junk.json", "{not json")}).code == kExitInput);

    GraphBuilder b;
    b.add_source();
    b.add_sink();
    for (int i = 0; i < 14; ++i) {
        std::string n = "j" + std::to_string(i);
        b.add_job(n, 1 + i % 3, 2);
        b.add_edge("s", n, 1);
        b.add_edge(n, "t", 1);
    }
    const std::string big = s.file("big.json", dump(instance_to_json(b.build())));
    CHECK(cli({"solve", "--engine", "oracle", "--mode", "mincost", "--deadline", "10", big}).code == kExitCap);
    ::setenv("SVC_SCHED_STATE_CAP", "3", 1);
    CHECK(cli({"solve", "--engine", "general", "--mode", "mincost", "--deadline", "10", big}).code == kExitCap);
    ::unsetenv("SVC_SCHED_STATE_CAP");
}

TEST_CASE("generate writes an instance and its sidecar") {
    Scratch s;
    const std::string spec = s.file("ks.json", R"({"items": [[3, 2], [2, 3]], "capacity": 3, "threshold": 3})");
    const std::string out = s.path("ks_inst.json");
    REQUIRE(cli({"generate", "--from", "knapsack", "--input", spec, "-o", out}).code == kExitOk);
    TaskGraph g = read_instance(out);
    CHECK(g.size() == 4);
    Json meta = read_json_file(s.path("ks_inst.meta.json"));
    CHECK(meta["deadline"] == 8);
    CHECK(meta["budget"] == 2);

    const std::string cnf = s.file("f.cnf", "p cnf 1 1\n1 1 1 0\n");
    Run r = cli({"generate", "--from", "cnf", "--input", cnf, "-o", s.path("sat.json")});
    REQUIRE(r.code == kExitOk);
    CHECK(read_instance(s.path("sat.json")).size() == 38);
    CHECK(read_json_file(s.path("sat.meta.json"))["deadline"] == 14);

    Run a = cli({"generate", "--from", "random", "--shape", "chain", "--n", "6", "--seed", "3"});
    Run b = cli({"generate", "--from", "random", "--shape", "chain", "--n", "6", "--seed", "3"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
}

TEST_CASE("pareto and bench") {
    Scratch s;
    const std::string inst = s.file("e1.json", dump(instance_to_json(e1())));
    Run p = cli({"pareto", "--engine", "oracle", inst});
    REQUIRE(p.code == kExitOk);
    CHECK(parse_json_text(p.out)["points"].size() == 2);
    Run q = cli({"pareto", "--alpha", "0.25", inst});
    REQUIRE(q.code == kExitOk);
    CHECK(parse_json_text(q.out)["points"].size() >= 1);

    s.file("e1.meta.json", R"({"deadline": 4, "budget": 2})");
    Run bench = cli({"bench", s.dir.string(), "--engines", "chain,general", "--mode", "minmakespan"});
    REQUIRE(bench.code == kExitOk);
    std::istringstream lines(bench.out);
    std::string header, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(header == "instance,engine,makespan,cost,oracleOpt,ratio,runtime-ms");
    CHECK(row1.rfind("e1.json,chain,4,2,4,1,", 0) == 0);
    CHECK(row2.rfind("e1.json,general,4,2,4,1,", 0) == 0);
}

TEST_CASE("weighted tardy jobs debug command") {
    Scratch s;
    const std::string f = s.file("w.json", R"([{"p": 2, "w": 3, "d": 2}, {"p": 2, "w": 2, "d": 3}, {"p": 1, "w": 1, "d": 3}])");
    Run r = cli({"debug", "wntj", f});
    REQUIRE(r.code == kExitOk);
    CHECK(parse_json_text(r.out)["late_weight"] == "2");
}
