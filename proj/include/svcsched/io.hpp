#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "svcsched/graph.hpp"

namespace svc {

using Json = nlohmann::ordered_json;

TaskGraph instance_from_json(const Json& j);
Json instance_to_json(const TaskGraph& g);

/// Schedule entries refer to jobs by name; every job must appear exactly once.
Schedule schedule_from_json(const TaskGraph& g, const Json& j);
Json schedule_to_json(const TaskGraph& g, const Schedule& s);

Json parse_json_text(std::string_view text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Canonical text form: two-space indent and a trailing newline.
std::string dump(const Json& j);

TaskGraph read_instance(const std::string& path);

}  // namespace svc
