#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "parasched/analysis.hpp"
#include "parasched/decomposition.hpp"
#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace parasched {

enum class EventKind { Start, Finish, Split, Migrate, Deadline };

const char* event_name(EventKind kind);

struct SimEvent {
  Rational time;
  EventKind kind;
  int vertex;
  int processor;  // processor or container index, fastest first; -1 if none
  Rational amount;  // work of the started part, or the deadline for Deadline
};

struct SimTrace {
  std::vector<SimEvent> events;  // non-decreasing in time
  std::vector<Rational> finish;  // per vertex, dummies included
  std::vector<Rational> deadlines;  // dispatcher only: d_p in assignment order
  Rational response_time;
  int split_count = 0;
  int migrations = 0;
};

nlohmann::json to_json(const SimEvent& e);

// Identity order over the original vertices.
std::vector<int> default_priority(const DagTask& task);
// A uniformly random permutation of the original vertices.
std::vector<int> random_priority(const DagTask& task, std::uint64_t seed);

// List scheduling of one DAG job on uniform processors. Eligible vertices are
// taken in `priority` order (earlier first); unlisted vertices come last by
// id. With migration, whenever a processor frees up every vertex on a slower
// processor is pulled back and
// the running set is reassigned fastest first, so the fastest processors are
// never idle while work runs on slower ones. Without migration a vertex stays
// where it started.
SimTrace simulate_uniform(const DagTask& task, const UniformPlatform& platform,
                          std::span<const int> priority, bool migration = true);

// Container dispatcher. `loads` are container load bounds; they are sorted
// non-increasing internally. A part placed on container p at time t gets
// deadline t + c / delta_p unless an occupied faster container ends earlier,
// in which case the part is cut to end exactly then and its remainder goes to
// the front of the queue.
SimTrace simulate_dispatcher(const DagTask& task, std::vector<Rational> loads,
                             std::span<const int> priority);

struct DeadlineMiss {
  std::size_t task;
  int vertex;
  long instance;
  Rational deadline;
  Rational finish;
};

struct MissReport {
  Rational horizon;
  long jobs = 0;
  std::vector<DeadlineMiss> misses;
  bool missed() const { return !misses.empty(); }
};

// Preemptive global EDF of the subtask jobs released in [0, horizon) on m unit
// processors, synchronous release. Equal deadlines go to the lower task, then
// the lower vertex. Every released job is run to completion.
MissReport simulate_gedf(std::span<const DecomposedTask> tasks, int m, const Rational& horizon);

// 10 times the largest period.
Rational default_horizon(std::span<const DecomposedTask> tasks);

}  // namespace parasched
