#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parasched/error.hpp"
#include "parasched/rational.hpp"

namespace parasched {

using Edge = std::pair<int, int>;

// A sporadic DAG task. Vertex ids are dense 0..n-1. When the input graph has
// several sources (sinks), a zero-WCET dummy source (sink) is appended with
// id >= original_size(), so the stored graph always has one source and one
// sink. The graph is immutable after construction.
class DagTask {
 public:
  DagTask(std::string id, std::vector<Rational> wcets, std::vector<Edge> edges,
          Rational period, Rational deadline);

  const std::string& id() const { return id_; }

  // Vertex count including dummies.
  int size() const { return static_cast<int>(wcet_.size()); }
  // Vertex count of the input graph (N).
  int original_size() const { return original_size_; }

  const Rational& wcet(int v) const { return wcet_[v]; }
  bool is_dummy(int v) const { return v >= original_size_; }
  const std::vector<int>& preds(int v) const { return preds_[v]; }
  const std::vector<int>& succs(int v) const { return succs_[v]; }

  // Input edges only (no dummy edges), deduplicated, in input order.
  const std::vector<Edge>& edges() const { return edges_; }

  const Rational& period() const { return period_; }
  const Rational& deadline() const { return deadline_; }

  bool acyclic() const { return !topo_.empty(); }
  // Throws Error(CycleDetected) on a cyclic graph.
  const std::vector<int>& topological_order() const;
  int source() const { return source_; }
  int sink() const { return sink_; }

  DagTask with_timing(Rational period, Rational deadline) const;

 private:
  std::string id_;
  std::vector<Rational> wcet_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
  Rational period_;
  Rational deadline_;
  std::vector<int> topo_;
  int original_size_ = 0;
  int source_ = -1;
  int sink_ = -1;
};

struct TaskMetrics {
  Rational work;           // C
  Rational critical_path;  // L
  Rational period;         // T
  Rational deadline;       // D
  Rational utilization;    // C / T
  Rational density;        // C / D
  Rational elasticity;     // L / T
  bool heavy = false;      // density > 1
};

// Checks acyclicity, WCET positivity and D <= T, then computes the metrics.
TaskMetrics validate(const DagTask& task);

// Longest summed-WCET path through the DAG.
Rational critical_path_length(const DagTask& task);

// Per-task inputs to the set-level aggregates. The decomposition-derived
// fields are filled only when the task has been decomposed.
struct TaskAnalysis {
  TaskMetrics metrics;
  std::optional<Rational> omega;
  std::optional<Rational> load;
  std::optional<Rational> max_density;
};

struct TaskSetSummary {
  Rational u_sum;
  Rational gamma_top;
  std::optional<Rational> omega_top;
  std::optional<Rational> delta_top;
  std::optional<Rational> load_sum;
};

// Throws Error(EmptyTaskSet) on an empty input. Optional aggregates are set
// only if every task carries the corresponding field.
TaskSetSummary summarize(std::span<const TaskAnalysis> tasks);

}  // namespace parasched
