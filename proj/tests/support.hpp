#pragma once

// Fixtures and brute-force references shared by the test binaries. Nothing
// here calls into the library's algorithms beyond DagTask itself.

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "parasched/rational.hpp"
#include "parasched/task_model.hpp"

namespace fixtures {

using parasched::DagTask;
using parasched::Edge;
using parasched::Rational;

inline Rational q(long n, long d = 1) { return parasched::make_rational(n, d); }

inline std::vector<Rational> wcets(std::initializer_list<long> values) {
  std::vector<Rational> out;
  for (long v : values) out.emplace_back(v);
  return out;
}

// Six-vertex example: 0 -> {1, 2, 3}, 2 -> 4, 3 -> 4, 1 -> 5, 4 -> 5,
// WCETs 1, 5, 3, 4, 2, 1 (C = 16, L = 8), T = D = 14.
inline DagTask six_vertex(Rational period = q(14)) {
  return DagTask("fig", wcets({1, 5, 3, 4, 2, 1}),
                 {{0, 1}, {0, 2}, {0, 3}, {2, 4}, {3, 4}, {1, 5}, {4, 5}}, period, period);
}

inline DagTask chain(const std::vector<Rational>& costs, Rational period) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < static_cast<int>(costs.size()); ++v) edges.emplace_back(v, v + 1);
  return DagTask("chain", costs, edges, period, period);
}

// Unit source, k parallel unit vertices, unit sink.
inline DagTask fork(int k, Rational period) {
  std::vector<Rational> costs(static_cast<std::size_t>(k + 2), Rational(1));
  std::vector<Edge> edges;
  for (int i = 1; i <= k; ++i) {
    edges.emplace_back(0, i);
    edges.emplace_back(i, k + 1);
  }
  return DagTask("fork", costs, edges, period, period);
}

// Small random DAG with integer WCETs in [1, max_wcet]; edges go forward in
// id order with a per-instance random density.
inline DagTask random_dag(std::mt19937_64& rng, int max_vertices, long max_wcet = 6,
                          long extra_period = 0) {
  std::uniform_int_distribution<int> count(1, max_vertices);
  std::uniform_int_distribution<long> cost(1, max_wcet);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  std::vector<Rational> c;
  for (int v = 0; v < n; ++v) c.emplace_back(cost(rng));
  const double p = unit(rng);
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (unit(rng) < p) edges.emplace_back(a, b);
  DagTask probe("r", c, edges, q(1), q(1));
  Rational length = parasched::critical_path_length(probe);
  std::uniform_int_distribution<long> slack(0, extra_period);
  Rational period = length + slack(rng);
  return probe.with_timing(period, period);
}

// Longest path by enumerating every source-to-sink path of the input graph.
inline Rational longest_path_by_enumeration(const DagTask& t) {
  const int n = t.original_size();
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : t.edges()) {
    succ[a].push_back(b);
    ++indeg[b];
  }
  Rational best = 0;
  std::function<void(int, Rational)> walk = [&](int v, Rational acc) {
    acc += t.wcet(v);
    if (succ[v].empty()) best = std::max(best, acc);
    for (int s : succ[v]) walk(s, acc);
  };
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) walk(v, Rational(0));
  return best;
}

}  // namespace fixtures
