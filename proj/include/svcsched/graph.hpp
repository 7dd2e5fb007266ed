#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "svcsched/time.hpp"

namespace svc {

using JobId = std::size_t;
using EdgeId = std::size_t;

enum class Loc : std::uint8_t { Server, Cloud };

constexpr Loc other(Loc l) { return l == Loc::Server ? Loc::Cloud : Loc::Server; }
std::string_view to_string(Loc l);

struct Job {
    std::string name;
    ExtTime ps;  // processing time on the server
    ExtTime pc;  // processing time in the cloud, also its cost
};

struct Edge {
    JobId from;
    JobId to;
    Time delay;
};

/// Precedence DAG with a designated source and sink. Construction only checks
/// that indices are in range; use validate_instance() for the model invariants.
class TaskGraph {
public:
    TaskGraph(std::vector<Job> jobs, std::vector<Edge> edges, JobId source, JobId sink);

    std::size_t size() const { return jobs_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Job& job(JobId j) const { return jobs_[j]; }
    const std::vector<Job>& jobs() const { return jobs_; }
    const std::string& name(JobId j) const { return jobs_[j].name; }
    ExtTime ps(JobId j) const { return jobs_[j].ps; }
    ExtTime pc(JobId j) const { return jobs_[j].pc; }
    ExtTime p(JobId j, Loc l) const { return l == Loc::Server ? jobs_[j].ps : jobs_[j].pc; }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    std::span<const EdgeId> in_edges(JobId j) const { return in_[j]; }
    std::span<const EdgeId> out_edges(JobId j) const { return out_[j]; }

    JobId source() const { return source_; }
    JobId sink() const { return sink_; }

    /// Jobs other than source and sink, in index order.
    std::vector<JobId> middle_jobs() const;

    bool acyclic() const { return topo_.size() == jobs_.size(); }
    /// Topological order; shorter than size() when the graph has a cycle.
    const std::vector<JobId>& topo_order() const { return topo_; }
    /// Position of each job in topo_order().
    const std::vector<std::size_t>& topo_rank() const { return rank_; }

    std::optional<JobId> find(std::string_view name) const;
    /// Edge (from, to) if present.
    std::optional<EdgeId> find_edge(JobId from, JobId to) const;

private:
    std::vector<Job> jobs_;
    std::vector<Edge> edges_;
    JobId source_;
    JobId sink_;
    std::vector<std::vector<EdgeId>> in_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<JobId> topo_;
    std::vector<std::size_t> rank_;
    std::unordered_map<std::string, JobId> by_name_;
};

/// Incremental construction by job name.
class GraphBuilder {
public:
    JobId add_job(std::string name, ExtTime ps, ExtTime pc);
    /// Source and sink with the fixed sizes p_s = 0, p_c = inf.
    JobId add_source(std::string name = "s");
    JobId add_sink(std::string name = "t");
    void add_edge(JobId from, JobId to, Time delay = 0);
    void add_edge(std::string_view from, std::string_view to, Time delay = 0);
    void set_source(JobId j) { source_ = j; }
    void set_sink(JobId j) { sink_ = j; }
    std::size_t size() const { return jobs_.size(); }
    /// Throws InputError for an unknown name.
    JobId lookup(std::string_view name) const;

    TaskGraph build() const;

private:

    std::vector<Job> jobs_;
    std::vector<Edge> edges_;
    std::optional<JobId> source_;
    std::optional<JobId> sink_;
};

/// Location and completion time per job.
struct Schedule {
    std::vector<Loc> loc;
    std::vector<Time> completion;

    Time makespan(const TaskGraph& g) const { return completion.at(g.sink()); }
    Cost cost(const TaskGraph& g) const;
    bool operator==(const Schedule&) const = default;
};

}  // namespace svc
