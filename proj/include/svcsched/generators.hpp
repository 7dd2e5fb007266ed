#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svcsched/graph.hpp"
#include "svcsched/io.hpp"

namespace svc {

/// Deterministic on every platform: mt19937_64 output with our own range
/// reduction instead of the unspecified standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    /// Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    /// True with probability num/den.
    bool chance(std::int64_t num, std::int64_t den);

private:
    std::mt19937_64 engine_;
};

struct GeneratedInstance {
    TaskGraph graph;
    Time deadline = 0;
    Cost budget = 0;
    Json meta = Json::object();
};

struct KnapsackItem {
    Time weight = 0;
    Time value = 0;
};

struct KnapsackSpec {
    std::vector<KnapsackItem> items;
    Time capacity = 0;
    Time threshold = 0;
};

/// Chain in item order with p_s = w + v, p_c = v, no delays; deadline
/// sum(v) + C and budget sum(v) - V. Throws InputError when V > sum(v).
GeneratedInstance gen_from_knapsack(const KnapsackSpec& k);

/// Fully parallel jobs with p_s = p_c = element and no delays; deadline and
/// budget both floor(sum / 2). meta["odd_total"] flags an odd sum.
GeneratedInstance gen_from_partition(const std::vector<Time>& elements);

struct CnfSpec {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;  // +i for x_i, -i for its negation
};

/// DIMACS CNF text; every clause must have exactly three literals.
CnfSpec parse_dimacs(std::string_view text);

/// Job roles in the unit gadget built from a formula.
struct SatGadget {
    std::vector<JobId> anchor_a, anchor_b;                 // a_1..a_l, b_1..b_l (index 0 is a_1)
    std::vector<std::pair<JobId, JobId>> variables;       // (x_i, not x_i)
    std::vector<JobId> clauses;
    std::vector<std::array<JobId, 3>> literals;
    std::vector<std::array<std::vector<JobId>, 3>> chains;  // connection chain per literal, in order
};

struct SatInstance {
    GeneratedInstance instance;
    SatGadget gadget;
};

/// Unit sizes and delays; deadline 12 + m + n, budget |J| - (2 + m + n). The
/// formula is satisfiable exactly when the instance has a schedule within
/// both bounds. Throws InputError for malformed clauses.
SatInstance gen_unit_from_3sat(const CnfSpec& f);

/// Structural checks on a generated gadget; returns the failures found.
/// Anchor a_k is taken to complete at k + 1, so every connection chain
/// must leave exactly one spare step between its two anchors.
std::vector<std::string> check_sat_gadget(const SatInstance& s, const CnfSpec& f);

enum class RandomShape { Chain, FullyParallel, ExtendedChain, LayeredDag, UnitDag };
std::string_view to_string(RandomShape s);
RandomShape parse_random_shape(std::string_view name);

struct RandomSpec {
    RandomShape shape = RandomShape::LayeredDag;
    std::size_t n = 6;  // jobs including source and sink
    Time max_p = 8;
    Time max_c = 4;
    std::uint64_t seed = 1;
};

GeneratedInstance gen_random(const RandomSpec& r);

}  // namespace svc
