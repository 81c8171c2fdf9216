#include "parasched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "parasched/analysis.hpp"
#include "parasched/decomposition.hpp"
#include "parasched/semifed.hpp"

namespace parasched {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::Utilization: return "utilization";
    case Axis::Processors: return "processors";
    case Axis::EdgeProbability: return "p";
  }
  return "unknown";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::DOur: return "D-OUR";
    case Method::FLi: return "F-LI";
    case Method::Sf1: return "SF1";
    case Method::Sf2: return "SF2";
    case Method::GLi: return "G-LI";
  }
  return "unknown";
}

Axis parse_axis(std::string_view s) {
  for (Axis a : {Axis::Utilization, Axis::Processors, Axis::EdgeProbability})
    if (s == axis_name(a)) return a;
  if (s == "util") return Axis::Utilization;
  if (s == "m") return Axis::Processors;
  throw Error(Errc::ParseError, "unknown axis '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
  for (Method m : all_methods())
    if (s == method_name(m)) return m;
  throw Error(Errc::ParseError, "unknown method '" + std::string(s) + "'");
}

std::vector<Method> all_methods() {
  return {Method::DOur, Method::FLi, Method::Sf1, Method::Sf2, Method::GLi};
}

std::vector<double> default_buckets(Axis a) {
  switch (a) {
    case Axis::Utilization: return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    case Axis::Processors: return {2, 4, 6, 8, 10, 12, 14, 16};
    case Axis::EdgeProbability: return {0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
  }
  return {};
}

std::vector<bool> evaluate(const std::vector<DagTask>& tasks, long m,
                           const std::vector<Method>& methods) {
  std::vector<TaskMetrics> metrics;
  metrics.reserve(tasks.size());
  for (const auto& t : tasks) metrics.push_back(validate(t));

  std::vector<bool> out;
  for (Method method : methods) {
    switch (method) {
      case Method::DOur: {
        std::vector<TaskAnalysis> per_task;
        bool feasible = true;
        for (std::size_t i = 0; i < tasks.size() && feasible; ++i) {
          feasible = metrics[i].critical_path <= metrics[i].deadline;
          if (feasible) per_task.push_back({metrics[i], structure_value(tasks[i]), {}, {}});
        }
        out.push_back(feasible && decomposed_test(summarize(per_task), m).schedulable);
        break;
      }
      case Method::FLi: out.push_back(federated_allocate(metrics, m).schedulable); break;
      case Method::Sf1: out.push_back(sf1(metrics, m).verdict.schedulable); break;
      case Method::Sf2: out.push_back(sf2(metrics, m).verdict.schedulable); break;
      case Method::GLi: out.push_back(gli_capacity_test(metrics, m).schedulable); break;
    }
  }
  return out;
}

GenConfig bucket_config(const ExperimentConfig& config, double bucket) {
  GenConfig g = config.gen;
  switch (config.axis) {
    case Axis::Utilization: g.utilization = bucket; break;
    case Axis::Processors:
      g.m = static_cast<int>(bucket);
      g.utilization = config.total_utilization / g.m;
      break;
    case Axis::EdgeProbability: g.p = bucket; break;
  }
  return g;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(Errc::ParseError, "bad number '" + std::string(s) + "'");
  return x;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(Errc::ParseError, "bad integer '" + std::string(s) + "'");
  return x;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, Axis axis, std::size_t bucket, std::size_t trial) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ static_cast<std::uint64_t>(axis));
  h = splitmix(h ^ bucket);
  return splitmix(h ^ trial);
}

std::vector<ExperimentRecord> sweep(const ExperimentConfig& config) {
  const std::vector<double> buckets =
      config.buckets.empty() ? default_buckets(config.axis) : config.buckets;
  const std::size_t trials = static_cast<std::size_t>(std::max(1, config.trials));
  const std::size_t jobs = buckets.size() * trials;
  const std::size_t nm = config.methods.size();
  std::vector<char> accepted(jobs * nm, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t b = j / trials, trial = j % trials;
      GenConfig g = bucket_config(config, buckets[b]);
      g.seed = trial_seed(config.seed, config.axis, b, trial);
      auto verdicts = evaluate(gen_task_set(g), g.m, config.methods);
      for (std::size_t k = 0; k < nm; ++k) accepted[j * nm + k] = verdicts[k];
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<ExperimentRecord> records;
  for (std::size_t b = 0; b < buckets.size(); ++b)
    for (std::size_t k = 0; k < nm; ++k) {
      long count = 0;
      for (std::size_t trial = 0; trial < trials; ++trial)
        count += accepted[(b * trials + trial) * nm + k];
      const long total = static_cast<long>(trials);
      records.push_back({config.axis, buckets[b], config.methods[k], count, total,
                         static_cast<double>(count) / static_cast<double>(total), config.seed});
    }
  return records;
}

void emit_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "axis,bucket,method,accepted,total,ratio,seed\n";
  for (const auto& r : records)
    out << axis_name(r.axis) << ',' << format_double(r.bucket) << ',' << method_name(r.method) << ','
        << r.accepted << ',' << r.total << ',' << format_double(r.ratio) << ',' << r.seed << '\n';
}

void emit_jsonl(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  for (const auto& r : records) {
    nlohmann::json j{{"axis", axis_name(r.axis)}, {"bucket", r.bucket},
                     {"method", method_name(r.method)}, {"accepted", r.accepted},
                     {"total", r.total}, {"ratio", r.ratio}, {"seed", r.seed}};
    out << j.dump() << '\n';
  }
}

std::vector<ExperimentRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "axis,bucket,method,accepted,total,ratio,seed")
    throw Error(Errc::ParseError, "missing CSV header");
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw Error(Errc::ParseError, "expected 7 fields: " + line);
    records.push_back({parse_axis(f[0]), parse_double(f[1]), parse_method(f[2]),
                       parse_int<long>(f[3]), parse_int<long>(f[4]), parse_double(f[5]),
                       parse_int<std::uint64_t>(f[6])});
  }
  return records;
}

}  // namespace parasched
