#include "svcsched/graph.hpp"

#include <algorithm>
#include <queue>

#include "svcsched/errors.hpp"

namespace svc {

std::string_view to_string(Loc l) { return l == Loc::Server ? "server" : "cloud"; }

TaskGraph::TaskGraph(std::vector<Job> jobs, std::vector<Edge> edges, JobId source, JobId sink)
    : jobs_(std::move(jobs)), edges_(std::move(edges)), source_(source), sink_(sink) {
    const std::size_t n = jobs_.size();
    if (source_ >= n || sink_ >= n)
        throw InputError("source or sink out of range");
    in_.resize(n);
    out_.resize(n);
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        const auto& ed = edges_[e];
        if (ed.from >= n || ed.to >= n)
            throw InputError("edge endpoint out of range");
        if (ed.delay < 0)
            throw InputError("negative communication delay");
        out_[ed.from].push_back(e);
        in_[ed.to].push_back(e);
    }
    for (JobId j = 0; j < n; ++j) {
        if (!by_name_.emplace(jobs_[j].name, j).second)
            throw InputError("duplicate job id '" + jobs_[j].name + "'");
        if ((jobs_[j].ps.finite() && jobs_[j].ps.value() < 0) || (jobs_[j].pc.finite() && jobs_[j].pc.value() < 0))
            throw InputError("negative processing time for '" + jobs_[j].name + "'");
    }

    // Kahn with a min-heap so the order is deterministic.
    std::vector<std::size_t> indeg(n);
    for (const auto& ed : edges_)
        ++indeg[ed.to];
    std::priority_queue<JobId, std::vector<JobId>, std::greater<>> ready;
    for (JobId j = 0; j < n; ++j)
        if (indeg[j] == 0)
            ready.push(j);
    rank_.assign(n, n);
    while (!ready.empty()) {
        JobId j = ready.top();
        ready.pop();
        rank_[j] = topo_.size();
        topo_.push_back(j);
        for (EdgeId e : out_[j])
            if (--indeg[edges_[e].to] == 0)
                ready.push(edges_[e].to);
    }
}

std::vector<JobId> TaskGraph::middle_jobs() const {
    std::vector<JobId> out;
    for (JobId j = 0; j < jobs_.size(); ++j)
        if (j != source_ && j != sink_)
            out.push_back(j);
    return out;
}

std::optional<JobId> TaskGraph::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EdgeId> TaskGraph::find_edge(JobId from, JobId to) const {
    for (EdgeId e : out_[from])
        if (edges_[e].to == to)
            return e;
    return std::nullopt;
}

JobId GraphBuilder::add_job(std::string name, ExtTime ps, ExtTime pc) {
    jobs_.push_back(Job{std::move(name), ps, pc});
    return jobs_.size() - 1;
}

JobId GraphBuilder::add_source(std::string name) {
    source_ = add_job(std::move(name), 0, kInf);
    return *source_;
}

JobId GraphBuilder::add_sink(std::string name) {
    sink_ = add_job(std::move(name), 0, kInf);
    return *sink_;
}

void GraphBuilder::add_edge(JobId from, JobId to, Time delay) { edges_.push_back(Edge{from, to, delay}); }

void GraphBuilder::add_edge(std::string_view from, std::string_view to, Time delay) {
    add_edge(lookup(from), lookup(to), delay);
}

JobId GraphBuilder::lookup(std::string_view name) const {
    for (JobId j = 0; j < jobs_.size(); ++j)
        if (jobs_[j].name == name)
            return j;
    throw InputError("unknown job '" + std::string(name) + "'");
}

TaskGraph GraphBuilder::build() const {
    if (!source_ || !sink_)
        throw InputError("graph needs a source and a sink");
    return TaskGraph(jobs_, edges_, *source_, *sink_);
}

Cost Schedule::cost(const TaskGraph& g) const {
    ExtTime total = 0;
    for (JobId j = 0; j < g.size(); ++j)
        if (loc[j] == Loc::Cloud)
            total += g.pc(j);
    return total.value();
}

}  // namespace svc
