#include "svcsched/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "svcsched/analysis.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/general_dp.hpp"
#include "svcsched/generators.hpp"
#include "svcsched/io.hpp"
#include "svcsched/oracle.hpp"
#include "svcsched/solve.hpp"
#include "svcsched/tardy.hpp"
#include "svcsched/validate.hpp"

namespace svc {

namespace fs = std::filesystem;

namespace {

struct SolveArgs {
    std::string instance;
    std::string engine = "auto";
    std::string mode = "mincost";
    std::optional<Time> deadline;
    std::optional<Cost> budget;
    std::string epsilon;
    bool special = false;
    Time c_max = 0;
    std::string output;
    std::string format = "json";
};

struct GenerateArgs {
    std::string from;
    std::string input;
    std::string output;
    std::string meta;
    std::string shape = "layered";
    std::size_t n = 8;
    Time max_p = 8;
    Time max_c = 4;
    std::uint64_t seed = 1;
};

struct ParetoArgs {
    std::string instance;
    std::string engine = "general";
    std::string alpha = "0.25";
    std::string output;
};

struct BenchArgs {
    std::string dir;
    std::vector<std::string> engines{"auto"};
    std::string mode = "minmakespan";
    std::optional<Time> deadline;
    std::optional<Cost> budget;
    std::string epsilon;
    std::string output;
};

std::size_t state_cap_from_env() {
    if (const char* v = std::getenv("SVC_SCHED_STATE_CAP")) {
        try {
            return static_cast<std::size_t>(std::stoull(v));
        } catch (const std::exception&) {
            throw InputError(std::string("SVC_SCHED_STATE_CAP is not a number: ") + v);
        }
    }
    return kDefaultStateCap;
}

std::optional<Ratio> parse_eps(const std::string& text) {
    if (text.empty())
        return std::nullopt;
    Ratio r = Ratio::parse(text);
    if (r.num <= 0)
        throw InputError("epsilon must be positive");
    return r;
}

Mode parse_mode(const std::string& m) {
    if (m == "mincost")
        return Mode::MinCost;
    if (m == "minmakespan")
        return Mode::MinMakespan;
    throw InputError("mode must be mincost or minmakespan");
}

SolveQuery make_query(const std::string& mode, std::optional<Time> deadline, std::optional<Cost> budget,
                      const std::string& eps) {
    const Mode m = parse_mode(mode);
    if (m == Mode::MinCost && !deadline)
        throw InputError("mincost needs --deadline");
    if (m == Mode::MinMakespan && !budget)
        throw InputError("minmakespan needs --budget");
    return {m, m == Mode::MinCost ? *deadline : *budget, parse_eps(eps)};
}

Engine engine_of(const std::string& name) {
    auto e = parse_engine(name);
    if (!e)
        throw InputError("unknown engine '" + name + "'");
    return *e;
}

Json guarantee_json(const Guarantee& g) {
    Json j;
    j["kind"] = std::string(to_string(g.kind));
    if (g.kind != Guarantee::Kind::Exact && g.kind != Guarantee::Kind::Factor)
        j["epsilon"] = g.epsilon.reduced().str();
    if (g.kind == Guarantee::Kind::Factor) {
        j["factor"] = g.factor.reduced().str();
        j["augmentation"] = g.augmentation.reduced().str();
    }
    if (!g.note.empty())
        j["note"] = g.note;
    return j;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty())
        out << text;
    else
        write_text_file(path, text);
}

TaskGraph load_valid(const std::string& path) {
    TaskGraph g = read_instance(path);
    auto report = validate_instance(g);
    if (!report.valid) {
        std::string msg = "invalid instance " + path + ":";
        for (const auto& p : report.problems)
            msg += "\n  " + p;
        throw InputError(msg);
    }
    return g;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    TaskGraph g = load_valid(a.instance);
    SolveQuery q = make_query(a.mode, a.deadline, a.budget, a.epsilon);
    SolveOptions opt{engine_of(a.engine), a.special, a.c_max, state_cap_from_env()};
    auto r = solve(g, q, opt);
    if (!r) {
        err << "infeasible: no schedule for " << a.mode << " with bound " << q.bound << "\n";
        return kExitInfeasible;
    }
    if (a.format == "csv-summary") {
        std::ostringstream s;
        s << "engine,makespan,cost,guarantee\n"
          << r->engine << ',' << r->makespan << ',' << r->cost << ',' << to_string(r->guarantee.kind) << '\n';
        emit(a.output, s.str(), out);
        return kExitOk;
    }
    Json j = schedule_to_json(g, r->schedule);
    Json meta;
    meta["engine"] = r->engine;
    meta["requested_engine"] = a.engine;
    meta["mode"] = a.mode;
    meta["bound"] = q.bound;
    if (q.epsilon)
        meta["epsilon"] = q.epsilon->reduced().str();
    meta["guarantee"] = guarantee_json(r->guarantee);
    j["meta"] = std::move(meta);
    emit(a.output, dump(j), out);
    return kExitOk;
}

int cmd_verify(const std::string& inst, const std::string& sched, std::ostream& out) {
    TaskGraph g = load_valid(inst);
    Json sj = read_json_file(sched);
    Schedule s = schedule_from_json(g, sj);
    auto report = validate_schedule(g, s);
    Json j;
    j["valid"] = report.valid;
    Json problems = Json::array();
    for (const auto& v : report.violations) {
        Json names = Json::array();
        for (JobId id : v.jobs)
            names.push_back(g.name(id));
        problems.push_back(Json{{"kind", std::string(to_string(v.kind))}, {"jobs", names}, {"detail", v.detail}});
    }
    bool ok = report.valid;
    if (report.valid) {
        j["makespan"] = report.makespan;
        j["cost"] = report.cost;
        for (const char* key : {"makespan", "cost"}) {
            if (!sj.contains(key))
                continue;
            const Time claimed = sj[key].get<Time>();
            const Time actual = std::string(key) == "makespan" ? report.makespan : report.cost;
            if (claimed != actual) {
                ok = false;
                problems.push_back(Json{{"kind", "ReportMismatch"},
                                        {"detail", std::string(key) + " reported as " + std::to_string(claimed) +
                                                       " but recomputed as " + std::to_string(actual)}});
            }
        }
    }
    j["valid"] = ok;
    j["violations"] = std::move(problems);
    out << dump(j);
    return ok ? kExitOk : kExitInfeasible;
}

std::string sidecar_path(const std::string& path) {
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + ".meta.json")).string();
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    std::optional<GeneratedInstance> gen;
    if (a.from == "knapsack") {
        Json j = read_json_file(a.input);
        KnapsackSpec k;
        for (const auto& item : j.at("items"))
            k.items.push_back({item.at(0).get<Time>(), item.at(1).get<Time>()});
        k.capacity = j.at("capacity").get<Time>();
        k.threshold = j.at("threshold").get<Time>();
        gen = gen_from_knapsack(k);
    } else if (a.from == "partition") {
        Json j = read_json_file(a.input);
        const Json& elems = j.is_array() ? j : j.at("elements");
        gen = gen_from_partition(elems.get<std::vector<Time>>());
    } else if (a.from == "cnf") {
        std::ifstream in(a.input);
        if (!in)
            throw InputError("cannot open " + a.input);
        std::stringstream text;
        text << in.rdbuf();
        CnfSpec f = parse_dimacs(text.str());
        SatInstance s = gen_unit_from_3sat(f);
        gen = std::move(s.instance);
    } else if (a.from == "random") {
        gen = gen_random(RandomSpec{parse_random_shape(a.shape), a.n, a.max_p, a.max_c, a.seed});
    } else {
        throw InputError("--from must be knapsack, partition, cnf or random");
    }
    const GeneratedInstance& gi = *gen;
    Json meta = gi.meta;
    meta["deadline"] = gi.deadline;
    meta["budget"] = gi.budget;
    const std::string text = dump(instance_to_json(gi.graph));
    emit(a.output, text, out);
    std::string meta_path = a.meta;
    if (meta_path.empty() && !a.output.empty())
        meta_path = sidecar_path(a.output);
    if (!meta_path.empty())
        write_text_file(meta_path, dump(meta));
    return kExitOk;
}

Json points_json(const TaskGraph& g, const std::vector<ParetoPoint>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) {
        Json s = schedule_to_json(g, p.witness);
        arr.push_back(Json{{"makespan", p.makespan}, {"cost", p.cost}, {"assignment", s["assignment"]}});
    }
    return arr;
}

int cmd_pareto(const ParetoArgs& a, std::ostream& out) {
    TaskGraph g = load_valid(a.instance);
    Json j;
    if (a.engine == "oracle") {
        j["engine"] = "oracle";
        j["points"] = points_json(g, oracle_pareto(g));
    } else if (a.engine == "general" || a.engine == "auto") {
        Ratio alpha = Ratio::parse(a.alpha);
        j["engine"] = "general";
        j["alpha"] = alpha.reduced().str();
        j["points"] = points_json(g, approx_pareto(g, alpha, state_cap_from_env()));
    } else {
        throw InputError("pareto supports --engine general or oracle");
    }
    emit(a.output, dump(j), out);
    return kExitOk;
}

int cmd_analyze(const std::string& inst, std::ostream& out) {
    TaskGraph g = load_valid(inst);
    Json j;
    ShapeClass shape = classify_shape(g);
    j["jobs"] = g.size();
    j["edges"] = g.edge_count();
    j["shape"] = std::string(to_string(shape.tag));
    try {
        j["phi"] = compute_phi(g);
    } catch (const StateSpaceExceeded&) {
        j["phi"] = nullptr;
    }
    bool finite = true;
    for (JobId v = 0; v < g.size(); ++v)
        finite = finite && g.ps(v).finite();
    if (finite) {
        ChainPath c = longest_chain(g);
        Json names = Json::array();
        for (JobId v : c.jobs)
            names.push_back(g.name(v));
        j["longest_chain"] = Json{{"length", c.length}, {"jobs", names}};
    } else {
        j["longest_chain"] = nullptr;
    }
    j["zero_makespan"] = zero_makespan_schedule(g).has_value();
    out << dump(j);
    return kExitOk;
}

std::string csv_field(const std::optional<double>& v) {
    if (!v)
        return "";
    std::ostringstream s;
    s.precision(6);
    s << *v;
    return s.str();
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.dir)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && e.path().extension() == ".json" && name.find(".meta.") == std::string::npos)
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    const std::size_t cap = state_cap_from_env();

    std::ostringstream csv;
    csv << "instance,engine,makespan,cost,oracleOpt,ratio,runtime-ms\n";
    for (const auto& path : files) {
        TaskGraph g = load_valid(path.string());
        std::optional<Time> deadline = a.deadline;
        std::optional<Cost> budget = a.budget;
        const fs::path meta = sidecar_path(path.string());
        if (fs::exists(meta)) {
            Json m = read_json_file(meta.string());
            if (!deadline && m.contains("deadline"))
                deadline = m["deadline"].get<Time>();
            if (!budget && m.contains("budget"))
                budget = m["budget"].get<Cost>();
        }
        SolveQuery q = make_query(a.mode, deadline, budget, a.epsilon);

        std::optional<Time> opt;
        if (g.size() <= kOracleDefaultCap) {
            Oracle o(g);
            if (q.mode == Mode::MinCost) {
                if (auto s = o.min_cost(q.bound))
                    opt = s->cost(g);
            } else if (auto s = o.min_makespan(q.bound)) {
                opt = s->makespan(g);
            }
        }
        for (const auto& e : a.engines) {
            const std::string label = path.filename().string();
            const auto t0 = std::chrono::steady_clock::now();
            std::optional<SolveOutcome> r;
            try {
                r = solve(g, q, SolveOptions{engine_of(e), false, 0, cap});
            } catch (const Error& ex) {
                err << label << " [" << e << "]: " << ex.what() << "\n";
                csv << label << ',' << e << ",,," << (opt ? std::to_string(*opt) : "") << ",,\n";
                continue;
            }
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::optional<double> ratio;
            if (r && opt) {
                const Time value = q.mode == Mode::MinCost ? r->cost : r->makespan;
                if (*opt > 0)
                    ratio = static_cast<double>(value) / static_cast<double>(*opt);
                else if (value == 0)
                    ratio = 1.0;
            }
            csv << label << ',' << e << ',' << (r ? std::to_string(r->makespan) : "") << ','
                << (r ? std::to_string(r->cost) : "") << ',' << (opt ? std::to_string(*opt) : "") << ','
                << csv_field(ratio) << ',' << csv_field(ms) << '\n';
        }
    }
    emit(a.output, csv.str(), out);
    return kExitOk;
}

int cmd_wntj(const std::string& path, std::ostream& out) {
    Json j = read_json_file(path);
    const Json& rows = j.is_array() ? j : j.at("jobs");
    std::vector<TardyJob> jobs;
    for (const auto& r : rows) {
        ExtTime w = r.at("w").is_string() && r.at("w").get<std::string>() == "inf" ? kInf : ExtTime(r.at("w").get<Time>());
        jobs.push_back(TardyJob{r.at("p").get<Time>(), w, r.at("d").get<Time>()});
    }
    WntjResult res = solve_wntj(jobs);
    Json o;
    o["late_weight"] = res.late_weight.str();
    o["early"] = res.early;
    o["completion"] = res.completion;
    out << dump(o);
    return res.feasible() ? kExitOk : kExitInfeasible;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Server/cloud DAG scheduling solver", "svcsched"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
    solve_cmd->add_option("instance", sa.instance, "Instance JSON")->required();
    solve_cmd->add_option("--engine", sa.engine, "auto|oracle|chain|parallel|extchain|general|unit|nodelay");
    solve_cmd->add_option("--mode", sa.mode, "mincost|minmakespan");
    solve_cmd->add_option("--deadline", sa.deadline, "Makespan bound for mincost");
    solve_cmd->add_option("--budget", sa.budget, "Cost bound for minmakespan");
    solve_cmd->add_option("--epsilon", sa.epsilon, "Accuracy, e.g. 0.5 or 1/3; omit for exact");
    solve_cmd->add_flag("--special", sa.special, "extchain: exact block solvers");
    solve_cmd->add_option("--cmax", sa.c_max, "extchain: delay bound for the bounded-delay block solver");
    solve_cmd->add_option("-o,--output", sa.output, "Output file (default stdout)");
    solve_cmd->add_option("--format", sa.format, "json|csv-summary")->check(CLI::IsMember({"json", "csv-summary"}));

    std::string v_inst, v_sched;
    auto* verify_cmd = app.add_subcommand("verify", "Check a schedule against an instance");
    verify_cmd->add_option("instance", v_inst)->required();
    verify_cmd->add_option("schedule", v_sched)->required();

    GenerateArgs ga;
    auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance");
    gen_cmd->add_option("--from", ga.from, "knapsack|partition|cnf|random")->required();
    gen_cmd->add_option("--input", ga.input, "Source problem file (JSON, or DIMACS for cnf)");
    gen_cmd->add_option("-o,--output", ga.output, "Instance file; a .meta.json sidecar is written next to it");
    gen_cmd->add_option("--meta", ga.meta, "Sidecar metadata file");
    gen_cmd->add_option("--shape", ga.shape, "chain|parallel|extchain|layered|unit");
    gen_cmd->add_option("--n", ga.n, "Jobs including source and sink");
    gen_cmd->add_option("--max-p", ga.max_p);
    gen_cmd->add_option("--max-c", ga.max_c);
    gen_cmd->add_option("--seed", ga.seed);

    ParetoArgs pa;
    auto* pareto_cmd = app.add_subcommand("pareto", "Approximate (or exact) Pareto front");
    pareto_cmd->add_option("instance", pa.instance)->required();
    pareto_cmd->add_option("--engine", pa.engine, "general|oracle");
    pareto_cmd->add_option("--alpha", pa.alpha);
    pareto_cmd->add_option("-o,--output", pa.output);

    std::string an_inst;
    auto* analyze_cmd = app.add_subcommand("analyze", "Shape, phi, longest chain, zero-makespan check");
    analyze_cmd->add_option("instance", an_inst)->required();

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Run engines over a directory of instances; CSV output");
    bench_cmd->add_option("dir", ba.dir)->required();
    bench_cmd->add_option("--engines", ba.engines)->delimiter(',');
    bench_cmd->add_option("--mode", ba.mode);
    bench_cmd->add_option("--deadline", ba.deadline);
    bench_cmd->add_option("--budget", ba.budget);
    bench_cmd->add_option("--epsilon", ba.epsilon);
    bench_cmd->add_option("-o,--output", ba.output);

    std::string wntj_file;
    auto* debug_cmd = app.add_subcommand("debug", "Subroutine access");
    debug_cmd->require_subcommand(1);
    auto* wntj_cmd = debug_cmd->add_subcommand("wntj", "Weighted number of tardy jobs on a job list");
    wntj_cmd->add_option("file", wntj_file)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (*solve_cmd)
            return cmd_solve(sa, out, err);
        if (*verify_cmd)
            return cmd_verify(v_inst, v_sched, out);
        if (*gen_cmd)
            return cmd_generate(ga, out);
        if (*pareto_cmd)
            return cmd_pareto(pa, out);
        if (*analyze_cmd)
            return cmd_analyze(an_inst, out);
        if (*bench_cmd)
            return cmd_bench(ba, out, err);
        if (*wntj_cmd)
            return cmd_wntj(wntj_file, out);
    } catch (const InstanceTooLarge& e) {
        err << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const StateSpaceExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace svc
