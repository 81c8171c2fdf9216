#include <doctest.h>

#include <random>

#include "parasched/decomposition.hpp"
#include "parasched/runtime_sim.hpp"
#include "support.hpp"

using namespace parasched;
using fixtures::q;

namespace {

std::vector<Rational> random_speeds(std::mt19937_64& rng) {
  std::vector<Rational> speeds{q(1)};
  const int extra = static_cast<int>(rng() % 4);
  for (int k = 0; k < extra; ++k) speeds.push_back(q(1 + static_cast<long>(rng() % 12), 12));
  return speeds;
}

int migrations_of(const SimTrace& trace, int vertex) {
  int n = 0;
  for (const auto& e : trace.events)
    if (e.kind == EventKind::Migrate && e.vertex == vertex) ++n;
  return n;
}

void check_precedence(const DagTask& t, const SimTrace& trace) {
  std::vector<Rational> start(t.size(), Rational(-1));
  for (const auto& e : trace.events)
    if (e.kind == EventKind::Start && start[e.vertex] < 0) start[e.vertex] = e.time;
  for (auto [u, v] : t.edges()) CHECK(trace.finish[u] <= start[v]);
  for (int v = 0; v < t.original_size(); ++v) CHECK(trace.finish[v] - start[v] >= t.wcet(v));
}

}  // namespace

TEST_SUITE("runtime_sim") {

TEST_CASE("dispatcher on the six-vertex example") {
  DagTask t = fixtures::six_vertex();
  std::vector<int> priority{0, 3, 2, 1, 4, 5};
  SimTrace trace = simulate_dispatcher(t, {q(1, 4), q(1), q(1, 2)}, priority);
  CHECK(trace.deadlines ==
        std::vector<Rational>{q(1), q(5), q(5), q(5), q(9), q(7), q(9), q(10), q(11)});
  CHECK(trace.response_time == 11);
  CHECK(trace.split_count == 3);
  check_precedence(t, trace);
}

TEST_CASE("uniform list scheduling on the six-vertex example") {
  DagTask t = fixtures::six_vertex();
  std::vector<int> priority{0, 3, 2, 1, 4, 5};
  UniformPlatform p({q(1), q(1, 2), q(1, 4)});
  SimTrace trace = simulate_uniform(t, p, priority);
  CHECK(trace.response_time == 11);
  bool v1 = false, v4 = false;
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::Migrate) continue;
    if (e.vertex == 1 && e.time == 5) v1 = true;
    if (e.vertex == 4 && e.time == 9) v4 = true;
  }
  CHECK(v1);
  CHECK(v4);
  CHECK(trace.response_time <= uniform_response_bound(validate(t), p));
  check_precedence(t, trace);

  SimTrace fixed = simulate_uniform(t, p, priority, false);
  CHECK(fixed.migrations == 0);
  CHECK(migrations_of(fixed, 1) == 0);
  CHECK(fixed.response_time <= weak_response_bound(validate(t), p));
}

TEST_CASE("a chain runs at the fastest speed") {
  DagTask t = fixtures::chain(fixtures::wcets({2, 3, 1}), q(30));
  UniformPlatform p({q(1, 2), q(1, 3)});
  SimTrace trace = simulate_uniform(t, p, default_priority(t));
  CHECK(trace.response_time == 12);
  SimTrace d = simulate_dispatcher(t, {q(1, 2), q(1, 3)}, default_priority(t));
  CHECK(d.response_time == 12);
  CHECK(d.split_count == 0);
}

TEST_CASE("random tasks finish within the response bounds") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    DagTask t = fixtures::random_dag(rng, 8);
    TaskMetrics m = validate(t);
    UniformPlatform p(random_speeds(rng));
    std::vector<int> priority = random_priority(t, rng());
    SimTrace with = simulate_uniform(t, p, priority, true);
    SimTrace without = simulate_uniform(t, p, priority, false);
    CHECK(with.response_time <= uniform_response_bound(m, p));
    CHECK(without.response_time <= weak_response_bound(m, p));
    CHECK(without.migrations == 0);
    check_precedence(t, with);
    check_precedence(t, without);

    std::vector<Rational> loads(p.speeds().begin(), p.speeds().end());
    SimTrace disp = simulate_dispatcher(t, loads, priority);
    CHECK(disp.response_time <= uniform_response_bound(m, p));
    check_precedence(t, disp);
  }
}

TEST_CASE("split counts on container platforms") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 300; ++i) {
    DagTask t = fixtures::random_dag(rng, 8);
    std::vector<int> priority = random_priority(t, rng());
    const int n = t.original_size();
    std::vector<Rational> one(1 + rng() % 3, q(1));
    one.push_back(q(1 + static_cast<long>(rng() % 11), 12));
    CHECK(simulate_dispatcher(t, one, priority).split_count <= n);
    std::vector<Rational> two(rng() % 3, q(1));
    two.push_back(q(1 + static_cast<long>(rng() % 11), 12));
    two.push_back(q(1 + static_cast<long>(rng() % 11), 12));
    CHECK(simulate_dispatcher(t, two, priority).split_count <= 2 * n);
  }
}

TEST_CASE("gedf meets every deadline of a lightly loaded set") {
  std::vector<DecomposedTask> set{decompose(fixtures::chain(fixtures::wcets({2, 3}), q(10))).task,
                                  decompose(fixtures::six_vertex(q(20))).task};
  MissReport r = simulate_gedf(set, 2, default_horizon(set));
  CHECK(r.horizon == 200);
  CHECK(r.jobs > 0);
  CHECK_FALSE(r.missed());
}

TEST_CASE("gedf reports misses on an overloaded processor") {
  std::vector<DecomposedTask> set{decompose(fixtures::chain(fixtures::wcets({6}), q(10))).task,
                                  decompose(fixtures::chain(fixtures::wcets({6}), q(10))).task};
  MissReport r = simulate_gedf(set, 1, q(20));
  CHECK(r.jobs == 4);
  CHECK(r.missed());
  CHECK_FALSE(simulate_gedf(set, 2, q(20)).missed());
}

TEST_CASE("random priority is a permutation") {
  DagTask t = fixtures::six_vertex();
  std::vector<int> p = random_priority(t, 4);
  std::sort(p.begin(), p.end());
  CHECK(p == default_priority(t));
  CHECK(random_priority(t, 4) == random_priority(t, 4));
}

}  // TEST_SUITE
