#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace parasched {

struct Verdict {
  std::string test;
  bool schedulable = false;
  std::optional<long> min_m;  // smallest processor count that passes, if any
  std::string reason;         // set when not schedulable
  nlohmann::json detail = nlohmann::json::object();
};

nlohmann::json to_json(const Verdict& v);

// Processor speeds sorted non-increasing; S_x and the uniformity are
// computed once at construction.
class UniformPlatform {
 public:
  // Throws Error(InvalidTask) on an empty vector or a non-positive speed.
  explicit UniformPlatform(std::vector<Rational> speeds);
  static UniformPlatform identical(int m);

  int size() const { return static_cast<int>(speeds_.size()); }
  const std::vector<Rational>& speeds() const { return speeds_; }
  const Rational& speed(int x) const { return speeds_[x]; }  // 0-based, fastest first
  const Rational& prefix(int x) const { return prefix_[x]; }  // S_x, S_0 = 0
  const Rational& total() const { return prefix_.back(); }    // S_m
  // max over x of (S_m - S_x) / speed of the x-th fastest.
  const Rational& uniformity() const { return uniformity_; }

 private:
  std::vector<Rational> speeds_;
  std::vector<Rational> prefix_;
  Rational uniformity_;
};

// GEDF test on sporadic subtasks: load_sum <= m - (m - 1) * delta_top.
Verdict gedf_density_test(const Rational& load_sum, const Rational& delta_top, long m);

// Processor-count test on decomposed tasks:
// m >= (U - Gamma) / (1/Omega - Gamma). Needs summary.omega_top.
Verdict decomposed_test(const TaskSetSummary& summary, long m);

Rational capacity_bound(const Rational& omega_top, long m);
// Minimal processor speed: Omega U / m + Omega Gamma (1 - 1/m).
Rational speed_requirement(const TaskSetSummary& summary, long m);

// Federated scheduling: ceil(gamma) dedicated processors per heavy task, light
// tasks worst-fit on the rest by density.
Verdict federated_allocate(std::span<const TaskMetrics> tasks, long m);

// U <= m / b and L <= D / b for every task, with b = (3 + sqrt 5) / 2.
Verdict gli_capacity_test(std::span<const TaskMetrics> tasks, long m);

// (C + lambda L) / S_m for any work-conserving schedule.
Rational uniform_response_bound(const TaskMetrics& metrics, const UniformPlatform& platform);
// L / slowest + (C - L) / S_m when eligible work may stay on a slow processor.
Rational weak_response_bound(const TaskMetrics& metrics, const UniformPlatform& platform);

}  // namespace parasched
