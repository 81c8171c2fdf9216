#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace parasched {

enum class PeriodMode {
  TargetUtilization,  // split U * m over the tasks, T = C / u
  GammaFormula,       // T = (L + C / (0.4 m U)) (1 + 0.25 Gamma(2, 1))
};

struct GenConfig {
  std::uint64_t seed = 1;
  int n_tasks = 5;  // 0 in gamma mode: add tasks until U * m is reached
  double p = 0.01;
  int m = 8;
  double utilization = 0.5;  // normalized, total / m
  int min_vertices = 10;
  int max_vertices = 50;
  int min_wcet = 50;
  int max_wcet = 100;
  PeriodMode mode = PeriodMode::TargetUtilization;

  // Larger DAGs: 50 to 250 vertices.
  void large_scale() {
    min_vertices = 50;
    max_vertices = 250;
  }
};

using Rng = std::mt19937_64;

// Erdos-Renyi DAG: edge (a, b) for a before b in a random vertex order,
// each with probability p. T = D = 1 until a period is chosen.
DagTask gen_dag(const GenConfig& config, Rng& rng, std::string id);

// Gamma-formula period, rounded up to a multiple of 1/1000.
Rational gen_period_gamma(const TaskMetrics& metrics, const GenConfig& config, Rng& rng);

// Uniform split of `total` over n parts with each part i strictly below
// caps[i] and above zero, in exact units of 1e-6 (UUniFast with discard).
// Returns an empty vector after `attempts` rejected draws.
std::vector<Rational> uunifast_discard(const Rational& total, const std::vector<Rational>& caps,
                                       Rng& rng, int attempts = 1000);

// Implicit-deadline task set. Same config and seed give the same set.
std::vector<DagTask> gen_task_set(const GenConfig& config);

}  // namespace parasched
