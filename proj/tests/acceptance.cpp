// Acceptance suite. Prints one PASS/FAIL line per criterion; `--only N` runs
// a single one. Exit status is non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "parasched/analysis.hpp"
#include "parasched/decomposition.hpp"
#include "parasched/experiment.hpp"
#include "parasched/runtime_sim.hpp"
#include "parasched/semifed.hpp"
#include "parasched/workload_gen.hpp"
#include "support.hpp"

using namespace parasched;
using fixtures::q;

namespace {

// Pinned budgets and tolerances.
constexpr double kGoldenSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kUniformSeconds = 120.0;
constexpr double kTrendSeconds = 600.0;
constexpr int kCorpusRandom = 1200;
constexpr int kCorpusMaxVertices = 8;
constexpr int kUniformTriples = 1500;
constexpr int kSummaries = 10000;
constexpr int kTrendTrials = 500;
constexpr double kCrossingTarget = 0.6;
constexpr double kCrossingTolerance = 0.1;
constexpr double kSamplingSlack = 0.02;
constexpr int kGedfSets = 150;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

TaskMetrics metrics_of(Rational c, Rational l, Rational d) {
  TaskMetrics m;
  m.work = c;
  m.critical_path = l;
  m.period = d;
  m.deadline = d;
  m.utilization = c / d;
  m.density = c / d;
  m.elasticity = l / d;
  m.heavy = m.density > 1;
  return m;
}

std::vector<std::vector<Rational>> bin_loads(const ContainerPlan& plan) {
  std::vector<std::vector<Rational>> out;
  for (const auto& bin : plan.bins) {
    std::vector<Rational> loads;
    for (const auto& c : bin) loads.push_back(c.delta);
    std::sort(loads.begin(), loads.end());
    out.push_back(loads);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Seeded random DAGs with at most 8 vertices, every chain shape up to 8
// vertices and every fork up to width 5. Periods leave some laxity.
std::vector<DagTask> corpus() {
  std::vector<DagTask> out;
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < kCorpusRandom; ++i) out.push_back(fixtures::random_dag(rng, kCorpusMaxVertices, 6, 25));
  for (int n = 1; n <= kCorpusMaxVertices; ++n) {
    std::vector<Rational> costs;
    for (int v = 0; v < n; ++v) costs.emplace_back(1 + (v * 3) % 5);
    Rational length = 0;
    for (const auto& c : costs) length += c;
    out.push_back(fixtures::chain(costs, length + n));
  }
  for (int k = 1; k <= 5; ++k) out.push_back(fixtures::fork(k, q(3 + k)));
  return out;
}

Outcome mixed_set_golden() {
  Outcome o;
  const auto start = Clock::now();
  std::vector<TaskMetrics> set{metrics_of(q(26), q(10), q(20)), metrics_of(q(26), q(10), q(20)),
                               metrics_of(q(25), q(10), q(20)), metrics_of(q(3), q(1), q(10))};
  o.require(gamma(set[0]) == q(8, 5) && gamma(set[2]) == q(3, 2), "gamma of the example set");
  Verdict fed = federated_allocate(set, 7);
  o.require(fed.schedulable && *fed.min_m == 7, "federated needs 7");
  o.require(!federated_allocate(set, 6).schedulable, "federated fits on 6");
  SemiFedResult a = sf1(set, 6);
  o.require(a.verdict.schedulable && *a.verdict.min_m == 6, "SF1 needs 6");
  SemiFedResult b = sf2(set, 5);
  o.require(b.verdict.schedulable && *b.verdict.min_m == 5, "SF2 needs 5");
  const std::vector<std::vector<Rational>> expected{{q(1, 10), q(3, 10), q(3, 5)}, {q(1, 2), q(1, 2)}};
  o.require(bin_loads(b.plan) == expected, "SF2 bins differ from {1/2,1/2},{3/5,3/10,1/10}");
  const double s = seconds_since(start);
  o.require(s < kGoldenSeconds, "took " + fmt(s) + " s");
  if (o.pass) o.detail = "federated 7, SF1 6, SF2 5 with bins {1/2,1/2} {3/5,3/10,1/10}";
  return o;
}

Outcome uniformity_golden() {
  Outcome o;
  o.require(gamma(metrics_of(q(16), q(8), q(14))) == q(4, 3), "gamma(16,8,14) != 4/3");
  o.require(UniformPlatform({q(1), q(1, 3)}).uniformity() == q(1, 3), "lambda{1,1/3} != 1/3");
  o.require(UniformPlatform({q(1), q(1, 4), q(1, 12)}).uniformity() == q(1, 3), "lambda{1,1/4,1/12} != 1/3");
  o.require(UniformPlatform({q(1), q(1, 6), q(1, 6)}).uniformity() == 1, "lambda{1,1/6,1/6} != 1");
  if (o.pass) o.detail = "gamma 4/3, lambda 1/3, 1/3, 1";
  return o;
}

Outcome segmentation_optimality() {
  Outcome o;
  const auto start = Clock::now();
  long compared = 0;
  for (const auto& t : corpus()) {
    TimingDiagram td = timing_diagram(t);
    auto segs = build_segments(td);
    SegmentationResult seg = segment_workload(t, td, segs);
    OracleResult oracle = segmentation_oracle(t, td, segs);
    o.require(seg.omega == oracle.omega_opt,
              "task " + std::to_string(compared) + ": omega " + to_string(seg.omega) + " vs optimum " +
                  to_string(oracle.omega_opt));
    ++compared;
  }
  const double s = seconds_since(start);
  o.require(s < kOracleSeconds, "took " + fmt(s) + " s");
  if (o.pass) o.detail = std::to_string(compared) + " tasks match the flow optimum in " + fmt(s) + " s";
  return o;
}

Outcome laxity_identities() {
  Outcome o;
  long checked = 0;
  for (const auto& t : corpus()) {
    Decomposition d = decompose(t);
    const Rational& omega = d.segmentation.omega;
    Rational sum = 0;
    for (const auto& s : d.laxity.segments) {
      sum += s.stretched;
      o.require(s.load() <= omega * d.metrics.utilization, "segment load above Omega U");
      o.require(s.density() <= omega * d.metrics.elasticity, "segment density above Omega Gamma");
    }
    o.require(sum == t.period(), "stretched lengths do not sum to T");
    for (auto [u, v] : t.edges())
      o.require(d.task.subtasks[u].deadline <= d.task.subtasks[v].release, "edge precedence broken");
    o.require(d.load.load <= omega * d.metrics.utilization, "dbf load above Omega U");
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " tasks: sum d = T, bounds and precedence hold";
  return o;
}

Outcome uniform_soundness() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(777);
  for (int i = 0; i < kUniformTriples; ++i) {
    DagTask t = fixtures::random_dag(rng, kCorpusMaxVertices);
    TaskMetrics m = validate(t);
    std::vector<Rational> speeds{q(1)};
    const int extra = static_cast<int>(rng() % 5);
    for (int k = 0; k < extra; ++k) speeds.push_back(q(1 + static_cast<long>(rng() % 24), 24));
    UniformPlatform p(speeds);
    std::vector<int> order = random_priority(t, rng());
    Rational with = simulate_uniform(t, p, order, true).response_time;
    Rational without = simulate_uniform(t, p, order, false).response_time;
    o.require(with <= uniform_response_bound(m, p), "triple " + std::to_string(i) + " exceeds (C + lambda L) / S");
    o.require(without <= weak_response_bound(m, p), "triple " + std::to_string(i) + " exceeds the no-migration bound");
  }
  const double s = seconds_since(start);
  o.require(s < kUniformSeconds, "took " + fmt(s) + " s");
  if (o.pass) o.detail = std::to_string(kUniformTriples) + " triples within both bounds in " + fmt(s) + " s";
  return o;
}

Outcome dispatcher_golden() {
  Outcome o;
  SimTrace trace = simulate_dispatcher(fixtures::six_vertex(), {q(1), q(1, 2), q(1, 4)}, std::vector<int>{0, 3, 2, 1, 4, 5});
  const std::vector<Rational> expected{q(1), q(5), q(5), q(5), q(9), q(7), q(9), q(10), q(11)};
  std::ostringstream seq;
  for (const auto& d : trace.deadlines) seq << to_string(d) << ' ';
  o.require(trace.deadlines == expected, "deadlines " + seq.str());
  o.require(trace.response_time == 11, "finish " + to_string(trace.response_time));
  if (o.pass) o.detail = "deadlines 1 5 5 5 9 7 9 10 11, finish 11";
  return o;
}

// Container platforms of the two semi-federated shapes built from each task's
// own capacity requirement.
Outcome split_counts() {
  Outcome o;
  long sf1_runs = 0, sf2_runs = 0;
  std::mt19937_64 rng(4242);
  for (const auto& t : corpus()) {
    TaskMetrics m = validate(t);
    if (m.critical_path >= m.deadline) continue;
    const int n = t.original_size();
    const Rational g = gamma(m);
    const long units = floor_long(g);
    const Rational frac = g - units;
    std::vector<int> order = random_priority(t, rng());
    std::vector<Rational> one(static_cast<std::size_t>(units), Rational(1));
    if (frac > 0) one.push_back(frac);
    if (one.empty()) continue;
    SimTrace a = simulate_dispatcher(t, one, order);
    o.require(a.split_count <= n, "SF1 platform: " + std::to_string(a.split_count) + " splits > N");
    if (units > 0) o.require(a.response_time <= m.deadline, "SF1 platform misses D (units " + std::to_string(units) + ")");
    ++sf1_runs;
    if (frac == 0) continue;
    const Rational low = delta_star(g);
    if (low >= frac) continue;
    // First part anywhere in [delta*, frac).
    Rational first = low + (frac - low) * q(static_cast<long>(rng() % 4), 4);
    std::vector<Rational> two(static_cast<std::size_t>(units), Rational(1));
    two.push_back(first);
    two.push_back(frac - first);
    SimTrace b = simulate_dispatcher(t, two, order);
    o.require(b.split_count <= 2 * n, "SF2 platform: " + std::to_string(b.split_count) + " splits > 2N");
    if (units > 0) o.require(b.response_time <= m.deadline, "SF2 platform misses D");
    ++sf2_runs;
  }
  if (o.pass)
    o.detail = std::to_string(sf1_runs) + " SF1-style and " + std::to_string(sf2_runs) + " SF2-style runs within N and 2N";
  return o;
}

Outcome test_implication() {
  Outcome o;
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<long> pick(0, 1000);
  long accepted = 0;
  for (int i = 0; i < kSummaries; ++i) {
    const long m = 1 + static_cast<long>(rng() % 32);
    TaskSetSummary s;
    s.u_sum = q(pick(rng) * m, 1000);
    s.gamma_top = std::min<Rational>(q(pick(rng), 1000), s.u_sum);
    s.omega_top = q(1000 + pick(rng) % 1000, 1000);
    const Rational& omega = *s.omega_top;
    if (decomposed_test(s, m).schedulable) {
      ++accepted;
      o.require(gedf_density_test(omega * s.u_sum, omega * s.gamma_top, m).schedulable,
                "summary " + std::to_string(i) + " passes the decomposed test only");
    }
    const Rational b = capacity_bound(omega, m);
    o.require(b >= 2 - q(1, m) && b < 4 - q(2, m), "capacity bound " + to_string(b) + " out of range");
  }
  if (o.pass)
    o.detail = std::to_string(kSummaries) + " summaries, " + std::to_string(accepted) +
               " accepted, all pass the GEDF condition; capacity bound in range";
  return o;
}

double ratio_of(const std::vector<ExperimentRecord>& records, std::size_t bucket, Method m,
                const std::vector<Method>& methods) {
  const auto k = static_cast<std::size_t>(std::find(methods.begin(), methods.end(), m) - methods.begin());
  return records[bucket * methods.size() + k].ratio;
}

Outcome trends() {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<Method> methods{Method::DOur, Method::FLi, Method::Sf1, Method::Sf2};

  ExperimentConfig util;
  util.axis = Axis::Utilization;
  util.gen.m = 8;
  util.gen.n_tasks = 5;
  util.gen.p = 0.01;
  util.trials = kTrendTrials;
  util.methods = methods;
  util.seed = 2017;
  util.buckets = default_buckets(Axis::Utilization);
  auto by_util = sweep(util);

  ExperimentConfig procs = util;
  procs.axis = Axis::Processors;
  procs.total_utilization = 3.0;
  procs.buckets = default_buckets(Axis::Processors);
  auto by_m = sweep(procs);

  std::vector<std::string> failures;
  // Linear interpolation of the first downward crossing of 1/2.
  double crossing = -1;
  for (std::size_t b = 0; b < util.buckets.size(); ++b) {
    const double r = ratio_of(by_util, b, Method::DOur, methods);
    if (r >= 0.5) continue;
    if (b == 0) {
      crossing = util.buckets[0];
    } else {
      const double r0 = ratio_of(by_util, b - 1, Method::DOur, methods);
      const double x0 = util.buckets[b - 1], x1 = util.buckets[b];
      crossing = x0 + (r0 - 0.5) / (r0 - r) * (x1 - x0);
    }
    break;
  }
  if (crossing < 0 || std::abs(crossing - kCrossingTarget) > kCrossingTolerance)
    failures.push_back("D-OUR crosses 50% at " + (crossing < 0 ? std::string("none") : fmt(crossing)) +
                       ", expected " + fmt(kCrossingTarget) + " +- " + fmt(kCrossingTolerance));

  auto dominance = [&](const std::vector<ExperimentRecord>& records, const std::vector<double>& buckets,
                       const char* axis) {
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      const double f = ratio_of(records, b, Method::FLi, methods);
      const double s1 = ratio_of(records, b, Method::Sf1, methods);
      const double s2 = ratio_of(records, b, Method::Sf2, methods);
      if (s2 + kSamplingSlack < s1 || s1 + kSamplingSlack < f)
        failures.push_back(std::string(axis) + " bucket " + fmt(buckets[b]) + ": SF2 " + fmt(s2) + ", SF1 " +
                           fmt(s1) + ", F-LI " + fmt(f));
    }
  };
  dominance(by_util, util.buckets, "utilization");
  dominance(by_m, procs.buckets, "processors");

  for (Method m : methods) {
    for (std::size_t b = 1; b < util.buckets.size(); ++b)
      if (ratio_of(by_util, b, m, methods) > ratio_of(by_util, b - 1, m, methods) + kSamplingSlack)
        failures.push_back(std::string(method_name(m)) + " rises with utilization at " + fmt(util.buckets[b]));
    for (std::size_t b = 1; b < procs.buckets.size(); ++b)
      if (ratio_of(by_m, b, m, methods) + kSamplingSlack < ratio_of(by_m, b - 1, m, methods))
        failures.push_back(std::string(method_name(m)) + " falls with m at " + fmt(procs.buckets[b]));
  }
  const double s = seconds_since(start);
  if (s >= kTrendSeconds) failures.push_back("took " + fmt(s) + " s");

  std::ostringstream curve;
  for (std::size_t b = 0; b < util.buckets.size(); ++b)
    curve << (b ? " " : "") << fmt(ratio_of(by_util, b, Method::DOur, methods));
  if (failures.empty()) {
    o.detail = "D-OUR crossing " + fmt(crossing) + ", dominance and monotonicity hold, " + fmt(s) + " s";
  } else {
    o.pass = false;
    for (std::size_t i = 0; i < failures.size(); ++i) o.detail += (i ? "; " : "") + failures[i];
  }
  o.detail += " [D-OUR by utilization: " + curve.str() + "]";
  return o;
}

Outcome gedf_sanity() {
  Outcome o;
  long sets = 0, jobs = 0;
  GenConfig config;
  config.min_vertices = 4;
  config.max_vertices = 12;
  config.min_wcet = 1;
  config.max_wcet = 9;
  config.mode = PeriodMode::GammaFormula;
  config.n_tasks = 0;
  config.m = 4;
  for (std::uint64_t seed = 1; sets < kGedfSets && seed < 100000; ++seed) {
    config.seed = seed;
    config.p = 0.05 + 0.1 * static_cast<double>(seed % 5);
    config.utilization = 0.2 + 0.1 * static_cast<double>(seed % 6);
    auto tasks = gen_task_set(config);
    std::vector<TaskAnalysis> per_task;
    std::vector<DecomposedTask> decomposed;
    for (const auto& t : tasks) {
      Decomposition d = decompose(t);
      per_task.push_back({d.metrics, d.segmentation.omega, d.load.load, d.max_density});
      decomposed.push_back(d.task);
    }
    Verdict v = decomposed_test(summarize(per_task), config.m);
    if (!v.min_m) continue;
    MissReport r = simulate_gedf(decomposed, static_cast<int>(*v.min_m), default_horizon(decomposed));
    jobs += r.jobs;
    ++sets;
    o.require(!r.missed(), "seed " + std::to_string(seed) + " misses on " + std::to_string(*v.min_m) + " processors");
  }
  o.require(sets == kGedfSets, "only " + std::to_string(sets) + " accepted sets");
  if (o.pass)
    o.detail = std::to_string(sets) + " accepted sets, " + std::to_string(jobs) + " jobs, no misses";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> criteria{
      mixed_set_golden, uniformity_golden, segmentation_optimality, laxity_identities, uniform_soundness,
      dispatcher_golden, split_counts, test_implication, trends, gedf_sanity};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
