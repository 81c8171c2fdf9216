#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace parasched {

// Lifetime windows on the [0, L] axis: a vertex may run anywhere in
// [ready[v], finish[v]] without breaking a precedence constraint.
struct TimingDiagram {
  std::vector<Rational> ready;
  std::vector<Rational> finish;
  Rational length;  // L
};

TimingDiagram timing_diagram(const DagTask& task);

struct Segment {
  int index = 0;
  Rational start;
  Rational end;
  Rational length;     // e(s) = end - start
  Rational work;       // c(s), assigned workload
  Rational stretched;  // d(s), zero until laxity is distributed
  bool heavy = false;  // c(s) / e(s) > C / L

  Rational load() const { return work / stretched; }
  Rational density() const { return length / stretched; }
};

// Consecutive intervals between the distinct ready/finish times.
// Throws Error(DegenerateWindow) when L == 0.
std::vector<Segment> build_segments(const TimingDiagram& td);

struct Portion {
  int vertex;
  Rational amount;
};

struct SegmentationResult {
  std::vector<Segment> segments;
  std::vector<std::vector<Portion>> assignment;  // per segment
  int split_count = 0;  // extra vertex parts created
  Rational work;        // C
  Rational critical_path;  // L
  Rational threshold;   // C / L
  Rational heavy_work;  // sum of c(s) over heavy segments
  Rational light_length;  // sum of e(s) over light segments
  Rational omega;       // heavy_work / C + light_length / L
};

// Three-phase workload assignment that minimises omega.
SegmentationResult segment_workload(const DagTask& task, const TimingDiagram& td,
                                    std::vector<Segment> segments);

// Independent check of segment_workload's optimality: the assignable work is
// the max flow of vertex -> covered segment -> sink with sink capacity
// e(s) * C / L, and omega_opt = 1 + (C - flow) / C.
struct OracleResult {
  Rational max_assignable;
  Rational overflow;  // C_out
  Rational omega_opt;
};

OracleResult segmentation_oracle(const DagTask& task, const TimingDiagram& td,
                                 const std::vector<Segment>& segments,
                                 std::size_t max_vertices = 12);

struct LaxityParams {
  Rational lambda;
  Rational rho;
};

struct LaxityResult {
  LaxityParams params;
  std::vector<Segment> segments;  // with stretched lengths set
};

// Stretches the segments from total length L to the deadline with
// lambda = rho = omega.
LaxityResult distribute_laxity(const DagTask& task, const SegmentationResult& seg);

struct Subtask {
  int vertex;
  Rational release;   // offset from the task release
  Rational deadline;  // relative to the task release
  Rational wcet;

  Rational density() const { return wcet / (deadline - release); }
};

struct DecomposedTask {
  std::string task_id;
  Rational period;
  std::vector<Subtask> subtasks;

  Rational work() const;
  Rational max_density() const;
};

// One sporadic subtask per non-dummy vertex, whose window is the vertex
// lifetime window mapped through the stretched segments.
DecomposedTask reassemble(const DagTask& task, const TimingDiagram& td,
                          const std::vector<Segment>& stretched);

// dbf(t): the most work of subtask jobs whose whole window fits in some
// interval of length t.
Rational demand_bound(const DecomposedTask& dt, const Rational& t);

struct LoadResult {
  Rational load;    // max over t > 0 of dbf(t) / t
  Rational window;  // a t attaining the maximum
};

LoadResult dbf_and_load(const DecomposedTask& dt);

struct Decomposition {
  TaskMetrics metrics;
  TimingDiagram timing;
  SegmentationResult segmentation;
  LaxityResult laxity;
  DecomposedTask task;
  LoadResult load;
  Rational max_density;
};

// Full pipeline. Skips the dbf scan when `with_load` is false.
Decomposition decompose(const DagTask& task, bool with_load = true);

// Only the structure characteristic value (segmentation, no laxity).
Rational structure_value(const DagTask& task);

}  // namespace parasched
