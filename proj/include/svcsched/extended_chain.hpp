#pragma once

#include <optional>
#include <span>
#include <vector>

#include "svcsched/graph.hpp"
#include "svcsched/solve.hpp"

namespace svc {

/// One way of getting from spine job u to spine job v. `window` is the time
/// the parallel block occupies after u completes; `dt` adds v's own
/// processing time on `to`. `cost` includes v when it runs in the cloud.
struct ExtensionEntry {
    Time window = 0;
    Time dt = 0;
    Loc from = Loc::Server;
    Loc to = Loc::Server;
    Cost cost = 0;
    std::vector<JobId> server_jobs;  // block jobs on the server, in processing order
    std::vector<JobId> cloud_jobs;
};

enum class BlockAssumption { UniformIncoming, LocallySmall, BoundedDelay };
std::string_view to_string(BlockAssumption a);

/// First assumption (in the order uniform incoming delays, locally small
/// delays, delays bounded by c_max) under which the block can be solved
/// exactly in the cloud-to-cloud case, if any.
std::optional<BlockAssumption> block_assumption(const TaskGraph& g, JobId u, JobId v, std::span<const JobId> block,
                                                Time c_max);

struct ExtChainOptions {
    bool scale = true;        // false: run on the unscaled instance
    bool special = false;     // exact cloud-to-cloud block solvers
    Time c_max = 0;           // delay bound for the BoundedDelay assumption
};

/// Extensions from u to v for a block (empty block: the direct edge u -> v)
/// with windows up to `estimate`, using the 2-approximate cloud-to-cloud rule.
std::vector<ExtensionEntry> build_extensions(const TaskGraph& g, JobId u, JobId v, std::span<const JobId> block,
                                             Time estimate);

/// Budget-constrained makespan on extended chains: cost <= budget and
/// makespan <= (2+eps) * OPT. Throws ShapeMismatch for general graphs.
std::optional<SolveOutcome> approx_makespan_extended(const TaskGraph& g, Cost budget, Ratio eps,
                                                     const ExtChainOptions& opt = {});

/// Same, with exact block solvers where every block satisfies one of the
/// assumptions: makespan <= (1+eps) * OPT. Throws AssumptionViolated naming
/// the first block that satisfies none.
std::optional<SolveOutcome> fptas_extended_special(const TaskGraph& g, Cost budget, Ratio eps, Time c_max = 0,
                                                   bool scale = true);

}  // namespace svc
