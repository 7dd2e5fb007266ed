#pragma once

#include <string>
#include <vector>

#include "svcsched/graph.hpp"

namespace svc {

struct InstanceReport {
    bool valid = true;
    std::vector<std::string> problems;
};

/// Checks every TaskGraph invariant and reports all that fail.
InstanceReport validate_instance(const TaskGraph& g);

enum class ViolationKind { ServerOverlap, PrecedenceViolated, DelayViolated, BadLocation };
std::string_view to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::vector<JobId> jobs;
    std::string detail;
};

struct ValidationReport {
    bool valid = true;
    Time makespan = 0;
    Cost cost = 0;
    std::vector<Violation> violations;
};

/// Checks server exclusivity and precedence/delay constraints; zero-length
/// server jobs are points and never overlap anything.
ValidationReport validate_schedule(const TaskGraph& g, const Schedule& s);

}  // namespace svc
