#include "parasched/task_model.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace parasched {

namespace {

std::vector<int> kahn_order(const std::vector<std::vector<int>>& succs,
                            const std::vector<std::vector<int>>& preds) {
  const int n = static_cast<int>(succs.size());
  std::vector<int> indegree(n);
  for (int v = 0; v < n; ++v) indegree[v] = static_cast<int>(preds[v].size());
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int s : succs[v])
      if (--indegree[s] == 0) ready.push(s);
  }
  if (static_cast<int>(order.size()) != n) order.clear();
  return order;
}

}  // namespace

DagTask::DagTask(std::string id, std::vector<Rational> wcets, std::vector<Edge> edges,
                 Rational period, Rational deadline)
    : id_(std::move(id)),
      wcet_(std::move(wcets)),
      period_(std::move(period)),
      deadline_(std::move(deadline)) {
  original_size_ = static_cast<int>(wcet_.size());
  if (original_size_ == 0) throw Error(Errc::InvalidTask, "task '" + id_ + "' has no vertices");

  std::set<Edge> seen;
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= original_size_ || to < 0 || to >= original_size_)
      throw Error(Errc::InvalidTask, "task '" + id_ + "': edge endpoint out of range");
    if (seen.insert({from, to}).second) edges_.emplace_back(from, to);
  }

  preds_.assign(original_size_, {});
  succs_.assign(original_size_, {});
  for (const auto& [from, to] : edges_) {
    succs_[from].push_back(to);
    preds_[to].push_back(from);
  }

  topo_ = kahn_order(succs_, preds_);
  if (topo_.empty()) return;  // cyclic: validate() reports it

  std::vector<int> sources, sinks;
  for (int v = 0; v < original_size_; ++v) {
    if (preds_[v].empty()) sources.push_back(v);
    if (succs_[v].empty()) sinks.push_back(v);
  }
  auto add_vertex = [this] {
    wcet_.emplace_back(0);
    preds_.emplace_back();
    succs_.emplace_back();
    return size() - 1;
  };
  if (sources.size() > 1) {
    source_ = add_vertex();
    for (int v : sources) {
      succs_[source_].push_back(v);
      preds_[v].push_back(source_);
    }
  } else {
    source_ = sources.front();
  }
  if (sinks.size() > 1) {
    sink_ = add_vertex();
    for (int v : sinks) {
      preds_[sink_].push_back(v);
      succs_[v].push_back(sink_);
    }
  } else {
    sink_ = sinks.front();
  }
  topo_ = kahn_order(succs_, preds_);
}

const std::vector<int>& DagTask::topological_order() const {
  if (topo_.empty()) throw Error(Errc::CycleDetected, "task '" + id_ + "' is not acyclic");
  return topo_;
}

DagTask DagTask::with_timing(Rational period, Rational deadline) const {
  std::vector<Rational> wcets(wcet_.begin(), wcet_.begin() + original_size_);
  return DagTask(id_, std::move(wcets), edges_, std::move(period), std::move(deadline));
}

Rational critical_path_length(const DagTask& task) {
  const auto& order = task.topological_order();
  std::vector<Rational> finish(task.size());
  Rational longest = 0;
  for (int v : order) {
    Rational start = 0;
    for (int p : task.preds(v)) start = std::max(start, finish[p]);
    finish[v] = start + task.wcet(v);
    longest = std::max(longest, finish[v]);
  }
  return longest;
}

TaskMetrics validate(const DagTask& task) {
  task.topological_order();
  for (int v = 0; v < task.original_size(); ++v)
    if (task.wcet(v) <= 0)
      throw Error(Errc::NonPositiveWcet,
                  "task '" + task.id() + "' vertex " + std::to_string(v) + " has WCET " +
                      to_string(task.wcet(v)));
  if (task.period() <= 0 || task.deadline() <= 0)
    throw Error(Errc::InvalidTask, "task '" + task.id() + "' needs a positive period and deadline");
  if (task.deadline() > task.period())
    throw Error(Errc::DeadlineExceedsPeriod, "task '" + task.id() + "' has D > T");

  TaskMetrics m;
  for (int v = 0; v < task.original_size(); ++v) m.work += task.wcet(v);
  m.critical_path = critical_path_length(task);
  m.period = task.period();
  m.deadline = task.deadline();
  m.utilization = m.work / m.period;
  m.density = m.work / m.deadline;
  m.elasticity = m.critical_path / m.period;
  m.heavy = m.density > 1;
  return m;
}

TaskSetSummary summarize(std::span<const TaskAnalysis> tasks) {
  if (tasks.empty()) throw Error(Errc::EmptyTaskSet, "cannot summarize an empty task set");
  TaskSetSummary s;
  bool have_omega = true, have_load = true, have_density = true;
  Rational omega_top = 0, delta_top = 0, load_sum = 0;
  for (const auto& t : tasks) {
    s.u_sum += t.metrics.utilization;
    s.gamma_top = std::max(s.gamma_top, t.metrics.elasticity);
    if (t.omega) omega_top = std::max(omega_top, *t.omega);
    else have_omega = false;
    if (t.load) load_sum += *t.load;
    else have_load = false;
    if (t.max_density) delta_top = std::max(delta_top, *t.max_density);
    else have_density = false;
  }
  if (have_omega) s.omega_top = omega_top;
  if (have_density) s.delta_top = delta_top;
  if (have_load) s.load_sum = load_sum;
  return s;
}

}  // namespace parasched
