#include "parasched/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace parasched {

nlohmann::json rational_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw Error(Errc::ParseError, "expected a rational, got " + j.dump());
}

namespace {

class ExactSax : public nlohmann::detail::json_sax_dom_parser<nlohmann::json> {
 public:
  using json_sax_dom_parser::json_sax_dom_parser;

  bool number_float(double, const std::string& text) {
    std::string copy = text;
    return json_sax_dom_parser::string(copy);
  }
};

}  // namespace

nlohmann::json parse_json_exact(const std::string& text) {
  nlohmann::json doc;
  ExactSax sax(doc, true);
  try {
    nlohmann::json::sax_parse(text, &sax);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return doc;
}

namespace {

const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(Errc::ParseError, where + ": missing '" + key + "'");
  return *it;
}

int as_int(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(Errc::ParseError, where + ": expected an integer");
  return j.get<int>();
}

DagTask task_from_json(const nlohmann::json& t, std::size_t index) {
  std::string where = "task " + std::to_string(index);
  if (!t.is_object()) throw Error(Errc::ParseError, where + ": expected an object");
  std::string id = t.contains("id") ? (t["id"].is_string() ? t["id"].get<std::string>() : t["id"].dump())
                                    : std::to_string(index);
  where = "task '" + id + "'";
  Rational period = rational_from_json(field(t, "period", where));
  Rational deadline = t.contains("deadline") ? rational_from_json(t["deadline"]) : period;

  const auto& vertices = field(t, "vertices", where);
  if (!vertices.is_array()) throw Error(Errc::ParseError, where + ": 'vertices' must be an array");
  const std::size_t n = vertices.size();
  std::vector<Rational> wcets(n);
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& v = vertices[k];
    int vid = v.contains("id") ? as_int(v["id"], where) : static_cast<int>(k);
    if (vid < 0 || static_cast<std::size_t>(vid) >= n || seen[vid])
      throw Error(Errc::ParseError, where + ": vertex ids must be dense 0..n-1");
    seen[vid] = true;
    wcets[vid] = rational_from_json(field(v, "wcet", where));
  }

  std::vector<Edge> edges;
  if (t.contains("edges")) {
    for (const auto& e : t["edges"]) {
      if (!e.is_array() || e.size() != 2) throw Error(Errc::ParseError, where + ": edges are [p, s] pairs");
      edges.emplace_back(as_int(e[0], where), as_int(e[1], where));
    }
  }
  return DagTask(std::move(id), std::move(wcets), std::move(edges), std::move(period),
                 std::move(deadline));
}

}  // namespace

std::vector<DagTask> task_set_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("tasks") || !doc["tasks"].is_array())
    throw Error(Errc::ParseError, "expected {\"tasks\": [...]}");
  std::vector<DagTask> tasks;
  for (std::size_t i = 0; i < doc["tasks"].size(); ++i) tasks.push_back(task_from_json(doc["tasks"][i], i));
  return tasks;
}

nlohmann::json task_set_to_json(std::span<const DagTask> tasks) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : tasks) {
    nlohmann::json vertices = nlohmann::json::array();
    for (int v = 0; v < t.original_size(); ++v)
      vertices.push_back({{"id", v}, {"wcet", rational_json(t.wcet(v))}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [from, to] : t.edges()) edges.push_back({from, to});
    list.push_back({{"id", t.id()},
                    {"period", rational_json(t.period())},
                    {"deadline", rational_json(t.deadline())},
                    {"vertices", vertices},
                    {"edges", edges}});
  }
  return {{"tasks", list}};
}

std::string read_file(const std::filesystem::path& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::vector<DagTask> read_task_set(const std::filesystem::path& path) {
  return task_set_from_json(parse_json_exact(read_file(path)));
}

}  // namespace parasched
