#include "parasched/workload_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace parasched {

DagTask gen_dag(const GenConfig& config, Rng& rng, std::string id) {
  std::uniform_int_distribution<int> count(config.min_vertices, config.max_vertices);
  std::uniform_int_distribution<int> cost(config.min_wcet, config.max_wcet);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  const int n = count(rng);
  std::vector<Rational> wcets;
  wcets.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) wcets.emplace_back(cost(rng));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) < config.p) edges.emplace_back(order[i], order[j]);
  return DagTask(std::move(id), std::move(wcets), std::move(edges), Rational(1), Rational(1));
}

Rational gen_period_gamma(const TaskMetrics& metrics, const GenConfig& config, Rng& rng) {
  std::gamma_distribution<double> noise(2.0, 1.0);
  const double base = to_double(metrics.critical_path) +
                      to_double(metrics.work) / (0.4 * config.m * config.utilization);
  const double period = base * (1.0 + 0.25 * noise(rng));
  Rational t(static_cast<long>(std::ceil(period * 1000.0)), 1000L);
  t.canonicalize();
  // The rounded value must stay above L even if the base was tiny.
  if (t <= metrics.critical_path) t = metrics.critical_path + Rational(1, 1000);
  return t;
}

std::vector<Rational> uunifast_discard(const Rational& total, const std::vector<Rational>& caps,
                                       Rng& rng, int attempts) {
  constexpr long unit = 1000000;
  const std::size_t n = caps.size();
  if (n == 0) return {};
  Rational scaled_total = total * unit;
  const long total_units = floor_long(scaled_total);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  for (int a = 0; a < attempts; ++a) {
    std::vector<long> units(n);
    double left = static_cast<double>(total_units);
    long assigned = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double rest = left * std::pow(uniform(rng), 1.0 / static_cast<double>(n - 1 - i));
      units[i] = std::lround(left - rest);
      assigned += units[i];
      left = rest;
    }
    units[n - 1] = total_units - assigned;

    std::vector<Rational> out;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      out.emplace_back(units[i], unit);
      out.back().canonicalize();
      ok = units[i] > 0 && out.back() < caps[i];
    }
    if (ok) return out;
  }
  return {};
}

std::vector<DagTask> gen_task_set(const GenConfig& config) {
  Rng rng(config.seed);
  const Rational target = round_to(config.utilization * config.m, 1000000);
  if (target <= 0) throw Error(Errc::InvalidTask, "target utilization must be positive");
  auto name = [](std::size_t i) { return "t" + std::to_string(i); };

  if (config.mode == PeriodMode::GammaFormula) {
    std::vector<DagTask> tasks;
    Rational u_sum = 0;
    const bool until_full = config.n_tasks <= 0;
    const std::size_t limit = until_full ? 1000 : static_cast<std::size_t>(config.n_tasks);
    while (tasks.size() < limit && (!until_full || u_sum < target)) {
      DagTask dag = gen_dag(config, rng, name(tasks.size()));
      TaskMetrics m = validate(dag);
      Rational t = gen_period_gamma(m, config, rng);
      u_sum += m.work / t;
      tasks.push_back(dag.with_timing(t, t));
    }
    return tasks;
  }

  const std::size_t n = static_cast<std::size_t>(std::max(1, config.n_tasks));
  for (int round = 0; round < 100; ++round) {
    std::vector<DagTask> dags;
    std::vector<Rational> caps;
    for (std::size_t i = 0; i < n; ++i) {
      dags.push_back(gen_dag(config, rng, name(i)));
      TaskMetrics m = validate(dags.back());
      caps.push_back(m.work / m.critical_path);
    }
    auto shares = uunifast_discard(target, caps, rng);
    if (shares.empty()) continue;
    std::vector<DagTask> tasks;
    for (std::size_t i = 0; i < n; ++i) {
      TaskMetrics m = validate(dags[i]);
      Rational t = m.work / shares[i];
      tasks.push_back(dags[i].with_timing(t, t));
    }
    return tasks;
  }
  throw Error(Errc::InvalidTask, "target utilization is out of reach for these DAG shapes");
}

}  // namespace parasched
