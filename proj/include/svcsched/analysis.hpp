#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svcsched/graph.hpp"

namespace svc {

/// A schedule with makespan 0 if one exists. Zero-delay edges never force a
/// wait, so only the components of the positive-delay edges matter: each must
/// fit entirely on the server at size 0 or entirely in the cloud at size 0.
std::optional<Schedule> zero_makespan_schedule(const TaskGraph& g);

inline constexpr std::size_t kDefaultPhiCap = 1'000'000;

/// Largest number of edges leaving a predecessor-closed job set that contains
/// the source. Enumerates all such sets; throws StateSpaceExceeded past `cap`.
std::size_t compute_phi(const TaskGraph& g, std::size_t cap = kDefaultPhiCap);

struct ChainPath {
    std::vector<JobId> jobs;  // source to sink inclusive
    Time length = 0;          // sum of server times
};

/// Heaviest source-to-sink path by server time. Requires finite server times.
ChainPath longest_chain(const TaskGraph& g);

enum class ShapeTag { Chain, FullyParallel, ExtendedChain, General };
std::string_view to_string(ShapeTag t);

/// blocks[i] holds the parallel jobs between spine[i] and spine[i + 1]; an
/// empty block means the two spine jobs are joined by a direct edge.
struct ShapeClass {
    ShapeTag tag = ShapeTag::General;
    std::vector<JobId> spine;
    std::vector<std::vector<JobId>> blocks;

    bool is_extended_chain() const { return tag != ShapeTag::General; }
};

/// Most specific shape: Chain, then FullyParallel, then ExtendedChain.
ShapeClass classify_shape(const TaskGraph& g);

}  // namespace svc
