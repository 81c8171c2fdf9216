#pragma once

#include <span>
#include <string>
#include <vector>

#include "parasched/analysis.hpp"
#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace parasched {

// (C - L) / (D - L). Throws Error(CriticalPathExceedsDeadline) unless L < D.
Rational gamma(const TaskMetrics& metrics);

// Smallest first half of a two-way split that keeps the task schedulable:
// max(f / 2, f / gamma) with f the fractional part of gamma.
Rational delta_star(const Rational& gamma);

// A sequential carrier of some task's work with a load bound.
struct ContainerTask {
  int owner = -1;  // task index
  Rational delta;
  Rational delta_star;  // equals delta for light tasks, which are never split
  bool light = false;
};

struct ContainerPlan {
  std::vector<long> dedicated;  // per task index; zero for light tasks
  std::vector<std::vector<ContainerTask>> bins;  // shared processors
};

struct SemiFedResult {
  Verdict verdict;
  ContainerPlan plan;
};

// Owners are written as ids[owner] when ids are given, else as indices.
nlohmann::json to_json(const ContainerPlan& plan, std::span<const std::string> ids = {});

// Per-task capacity split: floor(gamma) dedicated units plus fractional
// containers. Light tasks give a single unsplittable container.
std::vector<ContainerTask> fractional_containers(std::span<const TaskMetrics> tasks,
                                                 std::vector<long>& dedicated);

// One fractional container per heavy task; worst-fit decreasing on load.
SemiFedResult sf1(std::span<const TaskMetrics> tasks, long m);

// Packs by lower split bounds first, then trims every over-full processor to
// exactly 1 by splitting a container in two and re-packs the cut-off parts.
SemiFedResult sf2(std::span<const TaskMetrics> tasks, long m);

}  // namespace parasched
