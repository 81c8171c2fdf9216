#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parasched/analysis.hpp"
#include "parasched/decomposition.hpp"
#include "parasched/experiment.hpp"
#include "parasched/io.hpp"
#include "parasched/runtime_sim.hpp"
#include "parasched/semifed.hpp"
#include "parasched/workload_gen.hpp"

using namespace parasched;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format,
                const std::vector<std::string>& formats) {
  c.format = default_format;
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--out,-o", c.out, "output file, - for stdout")->capture_default_str();
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  return out;
}

json segment_json(const Segment& s) {
  return {{"start", rational_json(s.start)},   {"end", rational_json(s.end)},
          {"work", rational_json(s.work)},     {"stretched", rational_json(s.stretched)},
          {"heavy", s.heavy}};
}

json decomposition_json(const DagTask& t, const Decomposition& d) {
  json segments = json::array();
  for (const auto& s : d.laxity.segments) segments.push_back(segment_json(s));
  json subtasks = json::array();
  for (const auto& s : d.task.subtasks)
    subtasks.push_back({{"vertex", s.vertex},
                        {"release", rational_json(s.release)},
                        {"deadline", rational_json(s.deadline)},
                        {"wcet", rational_json(s.wcet)}});
  return {{"id", t.id()},
          {"work", rational_json(d.metrics.work)},
          {"critical_path", rational_json(d.metrics.critical_path)},
          {"period", rational_json(t.period())},
          {"omega", rational_json(d.segmentation.omega)},
          {"split_count", d.segmentation.split_count},
          {"load", rational_json(d.load.load)},
          {"max_density", rational_json(d.max_density)},
          {"segments", segments},
          {"subtasks", subtasks}};
}

void write_json(const Common& c, const json& doc) { write_file(c.out, doc.dump(2) + "\n"); }

int run_gen(const Common& c, GenConfig g, const std::string& mode, bool large_scale) {
  g.seed = c.seed;
  g.mode = mode == "gamma" ? PeriodMode::GammaFormula : PeriodMode::TargetUtilization;
  if (large_scale) g.large_scale();
  auto tasks = gen_task_set(g);
  write_json(c, task_set_to_json(tasks));
  return 0;
}

int run_decompose(const Common& c, const std::string& input) {
  auto tasks = read_task_set(input);
  if (c.format == "text") {
    std::ostringstream out;
    for (const auto& t : tasks) {
      Decomposition d = decompose(t);
      out << t.id() << ": C=" << to_string(d.metrics.work) << " L=" << to_string(d.metrics.critical_path)
          << " T=" << to_string(t.period()) << " omega=" << to_string(d.segmentation.omega)
          << " segments=" << d.segmentation.segments.size() << " splits=" << d.segmentation.split_count
          << " load=" << to_string(d.load.load) << " max_density=" << to_string(d.max_density) << "\n";
    }
    write_file(c.out, out.str());
    return 0;
  }
  json doc = json::array();
  for (const auto& t : tasks) doc.push_back(decomposition_json(t, decompose(t)));
  write_json(c, doc);
  return 0;
}

std::vector<Verdict> analyze(const std::vector<DagTask>& tasks, long m, const std::vector<std::string>& tests) {
  std::vector<TaskMetrics> metrics;
  std::vector<std::string> ids;
  for (const auto& t : tasks) {
    metrics.push_back(validate(t));
    ids.push_back(t.id());
  }
  auto decomposed_summary = [&] {
    std::vector<TaskAnalysis> per_task;
    for (const auto& t : tasks) {
      Decomposition d = decompose(t);
      per_task.push_back({d.metrics, d.segmentation.omega, d.load.load, d.max_density});
    }
    return summarize(per_task);
  };
  std::vector<Verdict> out;
  for (const auto& name : tests) {
    if (name == "D-OUR") {
      out.push_back(decomposed_test(decomposed_summary(), m));
    } else if (name == "GEDF") {
      TaskSetSummary s = decomposed_summary();
      out.push_back(gedf_density_test(*s.load_sum, *s.delta_top, m));
    } else if (name == "F-LI") {
      out.push_back(federated_allocate(metrics, m));
    } else if (name == "SF1" || name == "SF2") {
      SemiFedResult r = name == "SF1" ? sf1(metrics, m) : sf2(metrics, m);
      r.verdict.detail = to_json(r.plan, ids);
      out.push_back(r.verdict);
    } else if (name == "G-LI") {
      out.push_back(gli_capacity_test(metrics, m));
    }
  }
  return out;
}

int run_analyze(const Common& c, const std::string& input, long m, const std::string& test) {
  auto tasks = read_task_set(input);
  if (!test.empty()) {
    Verdict v = analyze(tasks, m, {test}).front();
    write_json(c, to_json(v));
    return v.schedulable ? 0 : 3;
  }
  json doc = json::array();
  for (const auto& v : analyze(tasks, m, {"D-OUR", "GEDF", "F-LI", "SF1", "SF2", "G-LI"})) doc.push_back(to_json(v));
  write_json(c, doc);
  return 0;
}

struct SimOptions {
  std::string mode = "uniform";
  std::string speeds = "1";
  std::size_t task = 0;
  std::string priority;
  bool random_order = false;
  bool no_migration = false;
  int m = 1;
  std::string horizon;
};

int run_simulate(const Common& c, const std::string& input, const SimOptions& o) {
  auto tasks = read_task_set(input);
  std::ostringstream out;
  if (o.mode == "gedf") {
    std::vector<DecomposedTask> decomposed;
    for (const auto& t : tasks) decomposed.push_back(decompose(t, false).task);
    Rational horizon = o.horizon.empty() ? default_horizon(decomposed) : parse_rational(o.horizon);
    MissReport r = simulate_gedf(decomposed, o.m, horizon);
    for (const auto& miss : r.misses)
      out << json{{"task", tasks[miss.task].id()},
                  {"vertex", miss.vertex},
                  {"instance", miss.instance},
                  {"deadline", rational_json(miss.deadline)},
                  {"finish", rational_json(miss.finish)}}
                 .dump()
          << "\n";
    out << json{{"summary", true},
                {"horizon", rational_json(r.horizon)},
                {"jobs", r.jobs},
                {"misses", r.misses.size()}}
               .dump()
        << "\n";
    write_file(c.out, out.str());
    return r.missed() ? 3 : 0;
  }

  if (o.task >= tasks.size()) throw Error(Errc::InvalidTask, "no task at index " + std::to_string(o.task));
  const DagTask& task = tasks[o.task];
  std::vector<int> order;
  if (!o.priority.empty()) {
    for (const auto& v : parse_list(o.priority)) order.push_back(static_cast<int>(floor_long(v)));
  } else {
    order = o.random_order ? random_priority(task, c.seed) : default_priority(task);
  }
  const std::vector<Rational> speeds = parse_list(o.speeds);
  SimTrace trace = o.mode == "dispatcher" ? simulate_dispatcher(task, speeds, order)
                                          : simulate_uniform(task, UniformPlatform(speeds), order, !o.no_migration);
  for (const auto& e : trace.events) out << to_json(e).dump() << "\n";
  TaskMetrics m = validate(task);
  json summary{{"summary", true},
               {"task", task.id()},
               {"response_time", rational_json(trace.response_time)},
               {"split_count", trace.split_count},
               {"migrations", trace.migrations}};
  if (o.mode == "uniform") {
    UniformPlatform p(speeds);
    summary["bound"] = rational_json(o.no_migration ? weak_response_bound(m, p) : uniform_response_bound(m, p));
  }
  out << summary.dump() << "\n";
  write_file(c.out, out.str());
  return 0;
}

int run_experiment(const Common& c, ExperimentConfig e, const std::vector<std::string>& methods,
                   bool large_scale) {
  e.seed = c.seed;
  if (!methods.empty()) {
    e.methods.clear();
    for (const auto& m : methods) e.methods.push_back(parse_method(m));
  }
  if (large_scale) e.gen.large_scale();
  auto records = sweep(e);
  std::ostringstream out;
  if (c.format == "jsonl")
    emit_jsonl(out, records);
  else
    emit_csv(out, records);
  write_file(c.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schedulability analysis and simulation of parallel DAG tasks"};
  app.require_subcommand(1);

  Common common;

  GenConfig gen;
  std::string gen_mode = "target";
  bool gen_large = false;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random task set as JSON");
  add_common(gen_cmd, common, "json", {"json"});
  gen_cmd->add_option("--n-tasks", gen.n_tasks, "number of tasks; 0 with --mode gamma fills the utilization")
      ->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "processor count")->capture_default_str();
  gen_cmd->add_option("--util", gen.utilization, "normalized utilization U / m")->capture_default_str();
  gen_cmd->add_option("--p", gen.p, "edge probability")->capture_default_str();
  gen_cmd->add_option("--min-vertices", gen.min_vertices)->capture_default_str();
  gen_cmd->add_option("--max-vertices", gen.max_vertices)->capture_default_str();
  gen_cmd->add_option("--mode", gen_mode, "period rule")->check(CLI::IsMember({"target", "gamma"}))
      ->capture_default_str();
  gen_cmd->add_flag("--large", gen_large, "50 to 250 vertices per task");

  std::string input;
  auto* dec_cmd = app.add_subcommand("decompose", "decompose every task of a task set");
  add_common(dec_cmd, common, "json", {"json", "text"});
  dec_cmd->add_option("input", input, "task-set JSON, - for stdin")->required();

  long analyze_m = 0;
  std::string test;
  auto* an_cmd = app.add_subcommand("analyze", "run the schedulability tests");
  add_common(an_cmd, common, "json", {"json"});
  an_cmd->add_option("input", input, "task-set JSON, - for stdin")->required();
  an_cmd->add_option("--m", analyze_m, "processor count")->required()->check(CLI::PositiveNumber);
  an_cmd->add_option("--test", test, "run one test only; exit status 3 if it fails")
      ->check(CLI::IsMember({"D-OUR", "GEDF", "F-LI", "SF1", "SF2", "G-LI"}));

  SimOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "simulate one job or the decomposed set");
  add_common(sim_cmd, common, "jsonl", {"jsonl"});
  sim_cmd->add_option("input", input, "task-set JSON, - for stdin")->required();
  sim_cmd->add_option("--mode", sim.mode)->check(CLI::IsMember({"uniform", "dispatcher", "gedf"}))
      ->capture_default_str();
  sim_cmd->add_option("--speeds", sim.speeds, "comma-separated speeds or container loads")->capture_default_str();
  sim_cmd->add_option("--task", sim.task, "task index for uniform and dispatcher")->capture_default_str();
  sim_cmd->add_option("--priority", sim.priority, "comma-separated vertex order; unlisted vertices follow by id");
  sim_cmd->add_flag("--random-order", sim.random_order, "shuffle the vertex order with --seed");
  sim_cmd->add_flag("--no-migration", sim.no_migration, "keep started vertices on their processor");
  sim_cmd->add_option("--m", sim.m, "processor count for gedf")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--horizon", sim.horizon, "gedf horizon, default 10 times the largest period");

  ExperimentConfig exp;
  std::string axis = "utilization";
  std::vector<std::string> methods;
  bool exp_large = false;
  std::string exp_mode = "target";
  auto* exp_cmd = app.add_subcommand("experiment", "acceptance-ratio sweep");
  add_common(exp_cmd, common, "csv", {"csv", "jsonl"});
  exp_cmd->add_option("--axis", axis)->check(CLI::IsMember({"utilization", "processors", "p"}))
      ->capture_default_str();
  exp_cmd->add_option("--m", exp.gen.m, "processor count")->capture_default_str();
  exp_cmd->add_option("--n-tasks", exp.gen.n_tasks)->capture_default_str();
  exp_cmd->add_option("--p", exp.gen.p, "edge probability")->capture_default_str();
  exp_cmd->add_option("--util", exp.gen.utilization, "normalized utilization")->capture_default_str();
  exp_cmd->add_option("--total-util", exp.total_utilization, "U_sum on the processors axis")->capture_default_str();
  exp_cmd->add_option("--trials", exp.trials, "task sets per bucket")->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp_cmd->add_option("--methods", methods, "subset of D-OUR F-LI SF1 SF2 G-LI")->delimiter(',');
  exp_cmd->add_option("--buckets", exp.buckets, "bucket values, default per axis")->delimiter(',');
  exp_cmd->add_option("--threads", exp.threads, "worker threads, 0 for all cores")->capture_default_str();
  exp_cmd->add_option("--min-vertices", exp.gen.min_vertices)->capture_default_str();
  exp_cmd->add_option("--max-vertices", exp.gen.max_vertices)->capture_default_str();
  exp_cmd->add_option("--mode", exp_mode, "period rule")->check(CLI::IsMember({"target", "gamma"}))
      ->capture_default_str();
  exp_cmd->add_flag("--large", exp_large, "50 to 250 vertices per task");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return run_gen(common, gen, gen_mode, gen_large);
    if (*dec_cmd) return run_decompose(common, input);
    if (*an_cmd) return run_analyze(common, input, analyze_m, test);
    if (*sim_cmd) return run_simulate(common, input, sim);
    exp.axis = parse_axis(axis);
    if (exp_mode == "gamma") exp.gen.mode = PeriodMode::GammaFormula;
    return run_experiment(common, exp, methods, exp_large);
  } catch (const Error& e) {
    std::cerr << "parasched: " << e.what() << "\n";
    return 1;
  }
}
