#include "svcsched/io.hpp"

#include <fstream>
#include <sstream>

#include "svcsched/errors.hpp"

namespace svc {

namespace {

ExtTime time_from_json(const Json& v, std::string_view what) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf")
            return kInf;
    } else if (v.is_number_integer()) {
        auto x = v.get<std::int64_t>();
        if (x >= 0)
            return ExtTime(x);
    }
    throw InputError(std::string(what) + " must be a nonnegative integer or \"inf\"");
}

Json time_to_json(ExtTime t) {
    if (t.is_inf())
        return "inf";
    return t.value();
}

const Json& field(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw InputError(std::string("missing field \"") + key + "\"");
    return obj.at(key);
}

std::string string_field(const Json& obj, const char* key) {
    const Json& v = field(obj, key);
    if (!v.is_string())
        throw InputError(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace

TaskGraph instance_from_json(const Json& j) {
    GraphBuilder b;
    const Json& jobs = field(j, "jobs");
    if (!jobs.is_array())
        throw InputError("\"jobs\" must be an array");
    for (const auto& job : jobs) {
        auto id = string_field(job, "id");
        b.add_job(id, time_from_json(field(job, "ps"), "ps of " + id), time_from_json(field(job, "pc"), "pc of " + id));
    }
    const Json& edges = field(j, "edges");
    if (!edges.is_array())
        throw InputError("\"edges\" must be an array");
    for (const auto& e : edges) {
        ExtTime c = time_from_json(field(e, "c"), "edge delay");
        if (c.is_inf())
            throw InputError("edge delay must be finite");
        b.add_edge(string_field(e, "from"), string_field(e, "to"), c.value());
    }
    b.set_source(b.lookup(string_field(j, "source")));
    b.set_sink(b.lookup(string_field(j, "sink")));
    return b.build();
}

Json instance_to_json(const TaskGraph& g) {
    Json out;
    Json jobs = Json::array();
    for (const auto& job : g.jobs())
        jobs.push_back(Json{{"id", job.name}, {"ps", time_to_json(job.ps)}, {"pc", time_to_json(job.pc)}});
    Json edges = Json::array();
    for (const auto& e : g.edges())
        edges.push_back(Json{{"from", g.name(e.from)}, {"to", g.name(e.to)}, {"c", e.delay}});
    out["jobs"] = std::move(jobs);
    out["edges"] = std::move(edges);
    out["source"] = g.name(g.source());
    out["sink"] = g.name(g.sink());
    return out;
}

Schedule schedule_from_json(const TaskGraph& g, const Json& j) {
    const Json& rows = field(j, "assignment");
    if (!rows.is_array())
        throw InputError("\"assignment\" must be an array");
    Schedule s{std::vector<Loc>(g.size(), Loc::Server), std::vector<Time>(g.size(), 0)};
    std::vector<bool> seen(g.size(), false);
    for (const auto& row : rows) {
        auto name = string_field(row, "job");
        auto id = g.find(name);
        if (!id)
            throw InputError("schedule names unknown job " + name);
        if (seen[*id])
            throw InputError("job " + name + " assigned twice");
        seen[*id] = true;
        auto loc = string_field(row, "loc");
        if (loc == "server")
            s.loc[*id] = Loc::Server;
        else if (loc == "cloud")
            s.loc[*id] = Loc::Cloud;
        else
            throw InputError("bad location \"" + loc + "\" for job " + name);
        const Json& c = field(row, "completion");
        if (!c.is_number_integer() || c.get<std::int64_t>() < 0)
            throw InputError("completion of " + name + " must be a nonnegative integer");
        s.completion[*id] = c.get<Time>();
    }
    for (JobId v = 0; v < g.size(); ++v)
        if (!seen[v])
            throw InputError("schedule misses job " + g.name(v));
    return s;
}

Json schedule_to_json(const TaskGraph& g, const Schedule& s) {
    Json rows = Json::array();
    for (JobId j = 0; j < g.size(); ++j)
        rows.push_back(Json{{"job", g.name(j)}, {"loc", to_string(s.loc[j])}, {"completion", s.completion[j]}});
    Json out;
    out["assignment"] = std::move(rows);
    out["makespan"] = s.makespan(g);
    out["cost"] = s.cost(g);
    return out;
}

Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

TaskGraph read_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

}  // namespace svc
