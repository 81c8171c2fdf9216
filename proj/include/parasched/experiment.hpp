#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "parasched/task_model.hpp"
#include "parasched/workload_gen.hpp"

namespace parasched {

enum class Axis { Utilization, Processors, EdgeProbability };
enum class Method { DOur, FLi, Sf1, Sf2, GLi };

const char* axis_name(Axis a);      // "utilization", "processors", "p"
const char* method_name(Method m);  // "D-OUR", "F-LI", "SF1", "SF2", "G-LI"
Axis parse_axis(std::string_view s);
Method parse_method(std::string_view s);
std::vector<Method> all_methods();

struct ExperimentConfig {
  Axis axis = Axis::Utilization;
  GenConfig gen;             // fields on the swept axis are overridden per bucket
  double total_utilization = 3.0;  // processors axis only: fixed U_sum
  std::vector<double> buckets;     // empty: the axis default
  int trials = 100;
  std::vector<Method> methods = all_methods();
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

std::vector<double> default_buckets(Axis a);

struct ExperimentRecord {
  Axis axis;
  double bucket;
  Method method;
  long accepted;
  long total;
  double ratio;
  std::uint64_t seed;

  bool operator==(const ExperimentRecord&) const = default;
};

// Verdict of each method on one task set with m processors.
std::vector<bool> evaluate(const std::vector<DagTask>& tasks, long m, const std::vector<Method>& methods);

// Generator settings for one bucket of the sweep.
GenConfig bucket_config(const ExperimentConfig& config, double bucket);

// Seed of one task set, a hash of (master seed, axis, bucket index, trial).
std::uint64_t trial_seed(std::uint64_t seed, Axis axis, std::size_t bucket, std::size_t trial);

// One record per (bucket, method), buckets in order, methods in config order.
// Task sets are evaluated in parallel; the output does not depend on the
// thread count.
std::vector<ExperimentRecord> sweep(const ExperimentConfig& config);

void emit_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void emit_jsonl(std::ostream& out, const std::vector<ExperimentRecord>& records);
// Throws Error(ParseError).
std::vector<ExperimentRecord> parse_csv(std::istream& in);

}  // namespace parasched
