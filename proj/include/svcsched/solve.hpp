#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "svcsched/graph.hpp"

namespace svc {

enum class Mode { MinCost, MinMakespan };

/// MinCost bounds the makespan by `bound` (the deadline); MinMakespan bounds
/// the cost by `bound` (the budget). Without epsilon engines run exactly.
struct SolveQuery {
    Mode mode = Mode::MinCost;
    Time bound = 0;
    std::optional<Ratio> epsilon;

    static SolveQuery min_cost(Time deadline, std::optional<Ratio> eps = std::nullopt) {
        return {Mode::MinCost, deadline, eps};
    }
    static SolveQuery min_makespan(Cost budget, std::optional<Ratio> eps = std::nullopt) {
        return {Mode::MinMakespan, budget, eps};
    }
};

struct Guarantee {
    enum class Kind {
        Exact,
        CostOptMakespanWithin,  // optimal cost for the deadline, makespan <= (1+eps) * deadline
        MakespanWithin,         // cost within budget, makespan <= (1+eps) * OPT
        Factor,                 // makespan <= factor * OPT (or deadline), cost <= augmentation * OPT
    };
    Kind kind = Kind::Exact;
    Ratio epsilon{0, 1};
    Ratio factor{1, 1};
    Ratio augmentation{1, 1};
    std::string note;

    static Guarantee exact() { return {}; }
    static Guarantee cost_opt(Ratio eps) { return {Kind::CostOptMakespanWithin, eps, {1, 1}, {1, 1}, {}}; }
    static Guarantee makespan_within(Ratio eps) { return {Kind::MakespanWithin, eps, {1, 1}, {1, 1}, {}}; }
    static Guarantee factor_of(Ratio rho, Ratio aug, std::string note = {}) {
        return {Kind::Factor, {0, 1}, rho, aug, std::move(note)};
    }
};
std::string_view to_string(Guarantee::Kind k);

struct SolveOutcome {
    Schedule schedule;
    Time makespan = 0;
    Cost cost = 0;
    Guarantee guarantee;
    std::string engine;
};

/// Fills makespan and cost from the schedule.
SolveOutcome make_outcome(const TaskGraph& g, Schedule s, Guarantee guarantee, std::string engine);

enum class Engine { Auto, Oracle, Chain, Parallel, ExtChain, General, Unit, NoDelay };
std::string_view to_string(Engine e);
std::optional<Engine> parse_engine(std::string_view name);

struct SolveOptions {
    Engine engine = Engine::Auto;
    bool special_case = false;    // extchain: use the exact block solvers
    Time c_max = 0;               // extchain: delay bound for the small-delay block solver
    std::size_t state_cap = 0;    // general DP, 0 means the default
};

/// Runs the chosen engine, or picks the most specific applicable one. Returns
/// nothing when the query is infeasible for that engine.
std::optional<SolveOutcome> solve(const TaskGraph& g, const SolveQuery& q, const SolveOptions& opt = {});

}  // namespace svc
