#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace parasched {

// Integers stay JSON integers; anything else becomes a "num/den" string.
nlohmann::json rational_json(const Rational& q);

// Accepts JSON integers, "num/den" strings and decimal strings. Floating
// point numbers only survive exactly if the document was read with
// parse_json_exact().
Rational rational_from_json(const nlohmann::json& j);

// Parses JSON keeping the source text of every non-integer number as a
// string, so 0.1 reads back as exactly 1/10.
nlohmann::json parse_json_exact(const std::string& text);

// Task-set schema:
// { "tasks": [ { "id", "period", "deadline", "vertices": [{"id","wcet"}],
//                "edges": [[p, s], ...] } ] }
// Vertex ids must be dense 0..n-1 in any order. "deadline" defaults to the
// period. Throws Error(ParseError).
std::vector<DagTask> task_set_from_json(const nlohmann::json& doc);
nlohmann::json task_set_to_json(std::span<const DagTask> tasks);

std::vector<DagTask> read_task_set(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// "-" writes to stdout.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace parasched
