#include "svcsched/solve.hpp"

#include "svcsched/analysis.hpp"
#include "svcsched/chain_parallel.hpp"
#include "svcsched/errors.hpp"
#include "svcsched/extended_chain.hpp"
#include "svcsched/general_dp.hpp"
#include "svcsched/heuristics.hpp"
#include "svcsched/oracle.hpp"

namespace svc {

std::string_view to_string(Guarantee::Kind k) {
    switch (k) {
        case Guarantee::Kind::Exact: return "exact";
        case Guarantee::Kind::CostOptMakespanWithin: return "cost-optimal, makespan within (1+eps)";
        case Guarantee::Kind::MakespanWithin: return "makespan within (1+eps)";
        case Guarantee::Kind::Factor: return "factor";
    }
    return "?";
}

SolveOutcome make_outcome(const TaskGraph& g, Schedule s, Guarantee guarantee, std::string engine) {
    SolveOutcome out;
    out.makespan = s.makespan(g);
    out.cost = s.cost(g);
    out.schedule = std::move(s);
    out.guarantee = std::move(guarantee);
    out.engine = std::move(engine);
    return out;
}

namespace {

constexpr std::pair<Engine, std::string_view> kEngineNames[] = {
    {Engine::Auto, "auto"},         {Engine::Oracle, "oracle"},   {Engine::Chain, "chain"},
    {Engine::Parallel, "parallel"}, {Engine::ExtChain, "extchain"}, {Engine::General, "general"},
    {Engine::Unit, "unit"},         {Engine::NoDelay, "nodelay"},
};

std::optional<SolveOutcome> run_oracle(const TaskGraph& g, const SolveQuery& q) {
    Oracle o(g);
    auto s = q.mode == Mode::MinCost ? o.min_cost(q.bound) : o.min_makespan(q.bound);
    if (!s)
        return std::nullopt;
    return make_outcome(g, *s, Guarantee::exact(), "oracle");
}

std::optional<SolveOutcome> run_chain_parallel(const TaskGraph& g, const SolveQuery& q, ShapeTag want) {
    if (classify_shape(g).tag != want)
        throw ShapeMismatch(std::string(want == ShapeTag::Chain ? "chain" : "parallel") + " engine: graph is " +
                            std::string(to_string(classify_shape(g).tag)));
    if (q.epsilon)
        return fptas_chain_parallel(g, q);
    return want == ShapeTag::Chain ? dp_chain(g, q) : dp_parallel(g, q);
}

std::optional<SolveOutcome> run_extchain(const TaskGraph& g, const SolveQuery& q, const SolveOptions& opt) {
    if (q.mode != Mode::MinMakespan)
        throw InputError("extchain engine only minimises the makespan");
    const Ratio eps = q.epsilon.value_or(Ratio{1, 2});
    const bool scale = q.epsilon.has_value();
    if (opt.special_case)
        return fptas_extended_special(g, q.bound, eps, opt.c_max, scale);
    return approx_makespan_extended(g, q.bound, eps, ExtChainOptions{scale, false, opt.c_max});
}

std::optional<SolveOutcome> run_general(const TaskGraph& g, const SolveQuery& q, std::size_t cap) {
    if (q.mode == Mode::MinCost) {
        if (q.epsilon)
            return rounded_min_cost(g, q.bound, *q.epsilon, cap);
        auto r = dyn_prog(g, q.bound, cap);
        if (!r)
            return std::nullopt;
        return make_outcome(g, r->schedule, Guarantee::exact(), "general");
    }
    if (q.epsilon)
        return fptas_min_makespan(g, q.bound, *q.epsilon, cap);
    auto r = dyn_prog_min_makespan(g, q.bound, cap);
    if (!r)
        return std::nullopt;
    return make_outcome(g, r->schedule, Guarantee::exact(), "general");
}

std::optional<SolveOutcome> run_unit(const TaskGraph& g, const SolveQuery& q) {
    if (q.mode != Mode::MinCost)
        throw InputError("unit engine takes a deadline");
    return unit_schedule(g, q.bound, q.epsilon.value_or(Ratio{1, 1}));
}

std::optional<SolveOutcome> run_nodelay(const TaskGraph& g, const SolveQuery& q) {
    if (is_nodelay_unit(g))
        return nodelay_unit_exact(g, q);
    if (q.mode != Mode::MinMakespan)
        throw InputError("nodelay engine minimises the makespan unless all sizes are 1");
    return nodelay_identical_makespan(g, q.bound);
}

// Weaker engines that avoid the general state space, for when it blows up.
std::optional<SolveOutcome> fallback(const TaskGraph& g, const SolveQuery& q, const ShapeClass& shape,
                                     const SolveOptions& opt) {
    if (q.mode == Mode::MinMakespan) {
        if (shape.is_extended_chain())
            return run_extchain(g, q, SolveOptions{Engine::ExtChain, false, opt.c_max, opt.state_cap});
        if (is_nodelay_identical(g))
            return nodelay_identical_makespan(g, q.bound);
    } else if (is_unit_instance(g)) {
        return run_unit(g, q);
    }
    throw StateSpaceExceeded("general dynamic program exceeded its state cap and no other engine applies");
}

}  // namespace

std::string_view to_string(Engine e) {
    for (auto [engine, name] : kEngineNames)
        if (engine == e)
            return name;
    return "?";
}

std::optional<Engine> parse_engine(std::string_view name) {
    for (auto [engine, n] : kEngineNames)
        if (n == name)
            return engine;
    return std::nullopt;
}

std::optional<SolveOutcome> solve(const TaskGraph& g, const SolveQuery& q, const SolveOptions& opt) {
    const std::size_t cap = opt.state_cap ? opt.state_cap : kDefaultStateCap;
    switch (opt.engine) {
        case Engine::Oracle: return run_oracle(g, q);
        case Engine::Chain: return run_chain_parallel(g, q, ShapeTag::Chain);
        case Engine::Parallel: return run_chain_parallel(g, q, ShapeTag::FullyParallel);
        case Engine::ExtChain: return run_extchain(g, q, opt);
        case Engine::General: return run_general(g, q, cap);
        case Engine::Unit: return run_unit(g, q);
        case Engine::NoDelay: return run_nodelay(g, q);
        case Engine::Auto: break;
    }

    const ShapeClass shape = classify_shape(g);
    if (shape.tag == ShapeTag::Chain || shape.tag == ShapeTag::FullyParallel)
        return run_chain_parallel(g, q, shape.tag);
    if (is_nodelay_unit(g))
        return nodelay_unit_exact(g, q);
    if (shape.tag == ShapeTag::ExtendedChain && q.mode == Mode::MinMakespan && q.epsilon) {
        try {
            return fptas_extended_special(g, q.bound, *q.epsilon, opt.c_max);
        } catch (const AssumptionViolated&) {
            // some block needs the general engine
        }
    }
    try {
        return run_general(g, q, cap);
    } catch (const StateSpaceExceeded&) {
        return fallback(g, q, shape, opt);
    }
}

}  // namespace svc
