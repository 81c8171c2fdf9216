#include "parasched/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "parasched/io.hpp"
#include "parasched/packing.hpp"
#include "parasched/semifed.hpp"

namespace parasched {

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j{{"test", v.test}, {"schedulable", v.schedulable}};
  j["min_m"] = v.min_m ? nlohmann::json(*v.min_m) : nlohmann::json(nullptr);
  if (!v.reason.empty()) j["reason"] = v.reason;
  j["detail"] = v.detail;
  return j;
}

UniformPlatform::UniformPlatform(std::vector<Rational> speeds) : speeds_(std::move(speeds)) {
  if (speeds_.empty()) throw Error(Errc::InvalidTask, "platform needs at least one processor");
  for (const auto& s : speeds_)
    if (s <= 0) throw Error(Errc::InvalidTask, "processor speed must be positive");
  std::sort(speeds_.begin(), speeds_.end(), std::greater<>());
  prefix_.assign(speeds_.size() + 1, Rational(0));
  for (std::size_t x = 0; x < speeds_.size(); ++x) prefix_[x + 1] = prefix_[x] + speeds_[x];
  uniformity_ = 0;
  for (std::size_t x = 0; x < speeds_.size(); ++x) {
    Rational lambda = (total() - prefix_[x + 1]) / speeds_[x];
    uniformity_ = std::max(uniformity_, lambda);
  }
}

UniformPlatform UniformPlatform::identical(int m) {
  return UniformPlatform(std::vector<Rational>(m, Rational(1)));
}

Verdict gedf_density_test(const Rational& load_sum, const Rational& delta_top, long m) {
  Verdict v;
  v.test = "gedf-density";
  Rational rhs = m - (m - 1) * delta_top;
  v.schedulable = delta_top <= 1 && load_sum <= rhs;
  v.detail = {{"load_sum", rational_json(load_sum)},
              {"delta_top", rational_json(delta_top)},
              {"bound", rational_json(rhs)}};
  if (delta_top < 1)
    v.min_m = std::max(1L, ceil_long((load_sum - delta_top) / (1 - delta_top)));
  else if (delta_top == 1 && load_sum <= 1)
    v.min_m = 1;
  if (!v.schedulable)
    v.reason = delta_top > 1 ? "a subtask has density above 1" : "total load exceeds the bound";
  return v;
}

Verdict decomposed_test(const TaskSetSummary& summary, long m) {
  if (!summary.omega_top) throw Error(Errc::InvalidTask, "decomposed test needs omega_top");
  const Rational& omega = *summary.omega_top;
  Verdict v;
  v.test = "decomposed";
  v.detail = {{"u_sum", rational_json(summary.u_sum)},
              {"gamma_top", rational_json(summary.gamma_top)},
              {"omega_top", rational_json(omega)}};
  if (omega * summary.gamma_top >= 1) {
    v.reason = "omega_top * gamma_top >= 1";
    return v;
  }
  Rational need = (summary.u_sum - summary.gamma_top) / (1 / omega - summary.gamma_top);
  v.detail["required_m"] = rational_json(need);
  v.min_m = std::max(1L, ceil_long(need));
  v.schedulable = m >= need;
  if (!v.schedulable) v.reason = "too few processors";
  return v;
}

Rational capacity_bound(const Rational& omega_top, long m) {
  return (2 - Rational(1, m)) * omega_top;
}

Rational speed_requirement(const TaskSetSummary& summary, long m) {
  if (!summary.omega_top) throw Error(Errc::InvalidTask, "speed requirement needs omega_top");
  const Rational& omega = *summary.omega_top;
  return omega * summary.u_sum / m + omega * summary.gamma_top * (1 - Rational(1, m));
}

Verdict federated_allocate(std::span<const TaskMetrics> tasks, long m) {
  Verdict v;
  v.test = "federated";
  // A heavy task with L >= D cannot finish on any number of processors.
  for (const auto& t : tasks)
    if (t.heavy && t.critical_path >= t.deadline) {
      v.reason = "critical path reaches the deadline";
      return v;
    }
  long dedicated = 0;
  std::vector<long> per_task(tasks.size(), 0);
  std::vector<PackItem> light;
  Rational light_sum = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].heavy) {
      per_task[i] = ceil_long(gamma(tasks[i]));
      dedicated += per_task[i];
    } else {
      light.push_back({i, tasks[i].density, tasks[i].density});
      light_sum += tasks[i].density;
    }
  }
  auto fits = [&](long procs) {
    return procs >= dedicated &&
           (light.empty() || worst_fit_partition(light, static_cast<std::size_t>(procs - dedicated)).ok);
  };
  v.schedulable = fits(m);
  for (long k = dedicated + ceil_long(light_sum); k <= dedicated + static_cast<long>(light.size()); ++k)
    if (fits(k)) {
      v.min_m = k;
      break;
    }
  if (light.empty()) v.min_m = std::max(1L, dedicated);
  v.detail = {{"dedicated", per_task}, {"shared", std::max(0L, m - dedicated)}};
  if (!v.schedulable)
    v.reason = dedicated > m ? "heavy tasks need more processors than available"
                             : "light tasks do not fit on the shared processors";
  return v;
}

Verdict gli_capacity_test(std::span<const TaskMetrics> tasks, long m) {
  // b is irrational; compare in double with a fixed slack.
  constexpr double slack = 1e-12;
  const double b = (3.0 + std::sqrt(5.0)) / 2.0;
  Verdict v;
  v.test = "gli-capacity";
  double u = 0;
  bool paths_ok = true;
  for (const auto& t : tasks) {
    u += to_double(t.utilization);
    if (to_double(t.critical_path) > to_double(t.deadline) / b + slack) paths_ok = false;
  }
  v.schedulable = paths_ok && u <= static_cast<double>(m) / b + slack;
  if (paths_ok) v.min_m = std::max(1L, static_cast<long>(std::ceil(u * b - slack)));
  v.detail = {{"u_sum", u}, {"b", b}};
  if (!v.schedulable)
    v.reason = paths_ok ? "utilization exceeds m / b" : "a critical path exceeds D / b";
  return v;
}

Rational uniform_response_bound(const TaskMetrics& metrics, const UniformPlatform& platform) {
  return (metrics.work + platform.uniformity() * metrics.critical_path) / platform.total();
}

Rational weak_response_bound(const TaskMetrics& metrics, const UniformPlatform& platform) {
  return metrics.critical_path / platform.speeds().back() +
         (metrics.work - metrics.critical_path) / platform.total();
}

}  // namespace parasched
