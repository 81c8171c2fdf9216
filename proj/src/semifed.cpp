#include "parasched/semifed.hpp"

#include <algorithm>
#include <numeric>

#include "parasched/io.hpp"
#include "parasched/packing.hpp"

namespace parasched {

Rational gamma(const TaskMetrics& metrics) {
  if (metrics.critical_path >= metrics.deadline)
    throw Error(Errc::CriticalPathExceedsDeadline, "gamma needs L < D");
  return (metrics.work - metrics.critical_path) / (metrics.deadline - metrics.critical_path);
}

Rational delta_star(const Rational& g) {
  Rational f = g - floor_long(g);
  if (f == 0) return 0;
  return std::max<Rational>(f / 2, f / g);
}

nlohmann::json to_json(const ContainerPlan& plan, std::span<const std::string> ids) {
  auto owner = [&](int i) {
    return ids.empty() ? nlohmann::json(i) : nlohmann::json(ids[static_cast<std::size_t>(i)]);
  };
  nlohmann::json dedicated = nlohmann::json::object();
  for (std::size_t i = 0; i < plan.dedicated.size(); ++i)
    if (plan.dedicated[i] > 0)
      dedicated[ids.empty() ? std::to_string(i) : ids[i]] = plan.dedicated[i];
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& bin : plan.bins) {
    nlohmann::json b = nlohmann::json::array();
    for (const auto& c : bin)
      b.push_back({{"owner", owner(c.owner)}, {"delta", rational_json(c.delta)}, {"light", c.light}});
    bins.push_back(std::move(b));
  }
  return {{"dedicated", dedicated}, {"bins", bins}};
}

std::vector<ContainerTask> fractional_containers(std::span<const TaskMetrics> tasks,
                                                 std::vector<long>& dedicated) {
  dedicated.assign(tasks.size(), 0);
  std::vector<ContainerTask> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const int owner = static_cast<int>(i);
    if (!tasks[i].heavy) {
      out.push_back({owner, tasks[i].density, tasks[i].density, true});
      continue;
    }
    Rational g = gamma(tasks[i]);
    dedicated[i] = floor_long(g);
    Rational f = g - dedicated[i];
    if (f > 0) out.push_back({owner, f, delta_star(g), false});
  }
  return out;
}

namespace {

using Attempt = SemiFedResult (*)(std::span<const TaskMetrics>, long,
                                  const std::vector<ContainerTask>&, const std::vector<long>&);

long total_of(const std::vector<long>& v) { return std::accumulate(v.begin(), v.end(), 0L); }

SemiFedResult sf1_at(std::span<const TaskMetrics>, long m, const std::vector<ContainerTask>& items,
                     const std::vector<long>& dedicated) {
  SemiFedResult r;
  r.verdict.test = "sf1";
  r.plan.dedicated = dedicated;
  const long shared = m - total_of(dedicated);
  if (shared < 0) {
    r.verdict.reason = "dedicated processors exceed m";
    return r;
  }
  std::vector<PackItem> pack;
  for (std::size_t k = 0; k < items.size(); ++k) pack.push_back({k, items[k].delta, items[k].delta});
  PackResult p = worst_fit_partition(pack, static_cast<std::size_t>(shared));
  r.plan.bins.assign(static_cast<std::size_t>(shared), {});
  if (!p.ok) {
    r.verdict.reason = "partitioning failed";
    return r;
  }
  for (std::size_t k = 0; k < items.size(); ++k) r.plan.bins[p.bin_of[k]].push_back(items[k]);
  r.verdict.schedulable = true;
  return r;
}

struct Bin {
  std::vector<ContainerTask> items;
  Rational load;
  Rational star;
  bool over = false;
};

// Splits containers in an over-full bin until its load is exactly 1. Each cut
// keeps at least delta_star in place; the cut-off parts are returned.
std::vector<ContainerTask> scrape(Bin& bin) {
  std::vector<ContainerTask> cut;
  Rational w = bin.load - 1;
  for (auto& c : bin.items) {
    if (w == 0) break;
    if (c.light) continue;
    Rational spare = c.delta - c.delta_star;
    if (spare <= 0) continue;
    Rational take = std::min(spare, w);
    c.delta -= take;
    cut.push_back({c.owner, take, take, false});
    w -= take;
  }
  bin.load = 1;
  return cut;
}

SemiFedResult sf2_at(std::span<const TaskMetrics>, long m, const std::vector<ContainerTask>& items,
                     const std::vector<long>& dedicated) {
  SemiFedResult r;
  r.verdict.test = "sf2";
  r.plan.dedicated = dedicated;
  const long shared = m - total_of(dedicated);
  if (shared < 0) {
    r.verdict.reason = "dedicated processors exceed m";
    return r;
  }
  std::vector<Bin> bins(static_cast<std::size_t>(shared));
  auto fail = [&](const char* stage) {
    r.verdict.reason = stage;
    r.plan.bins.clear();
    for (auto& b : bins) r.plan.bins.push_back(b.items);
    return r;
  };

  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].delta_star > items[b].delta_star;
  });
  std::vector<std::size_t> psi;
  for (std::size_t k : order) {
    const ContainerTask& c = items[k];
    Bin* best = nullptr;
    for (auto& b : bins)
      if (!b.over && b.star + c.delta_star <= 1 && (!best || b.star < best->star)) best = &b;
    if (!best) return fail("placement by lower split bound failed");
    best->items.push_back(c);
    best->star += c.delta_star;
    best->load += c.delta;
    if (best->load > 1) {
      best->over = true;
      psi.push_back(static_cast<std::size_t>(best - bins.data()));
    }
  }

  std::vector<ContainerTask> cut;
  for (std::size_t x : psi) {
    auto parts = scrape(bins[x]);
    cut.insert(cut.end(), parts.begin(), parts.end());
  }

  std::vector<std::size_t> open;
  std::vector<Rational> loads;
  for (std::size_t x = 0; x < bins.size(); ++x)
    if (!bins[x].over) {
      open.push_back(x);
      loads.push_back(bins[x].load);
    }
  std::vector<PackItem> pack;
  for (std::size_t k = 0; k < cut.size(); ++k) pack.push_back({k, cut[k].delta, cut[k].delta});
  PackResult p = worst_fit_partition(pack, loads);
  if (!p.ok) return fail("re-packing split parts failed");
  for (std::size_t k = 0; k < cut.size(); ++k) {
    Bin& b = bins[open[static_cast<std::size_t>(p.bin_of[k])]];
    b.items.push_back(cut[k]);
    b.load += cut[k].delta;
  }

  for (auto& b : bins) r.plan.bins.push_back(std::move(b.items));
  r.verdict.schedulable = true;
  return r;
}

SemiFedResult run(std::span<const TaskMetrics> tasks, long m, Attempt attempt, const char* name) {
  for (const auto& t : tasks)
    if (t.heavy && t.critical_path >= t.deadline) {
      SemiFedResult r;
      r.verdict.test = name;
      r.verdict.reason = "critical path reaches the deadline";
      return r;
    }
  std::vector<long> dedicated;
  const auto items = fractional_containers(tasks, dedicated);
  SemiFedResult r = attempt(tasks, m, items, dedicated);

  const long base = total_of(dedicated);
  Rational shared_load = 0;
  for (const auto& c : items) shared_load += c.delta;
  for (long k = std::max(1L, base + ceil_long(shared_load));
       k <= base + static_cast<long>(items.size()); ++k)
    if (attempt(tasks, k, items, dedicated).verdict.schedulable) {
      r.verdict.min_m = k;
      break;
    }
  if (items.empty()) r.verdict.min_m = std::max(1L, base);
  r.verdict.detail = to_json(r.plan);
  return r;
}

}  // namespace

SemiFedResult sf1(std::span<const TaskMetrics> tasks, long m) { return run(tasks, m, sf1_at, "sf1"); }

SemiFedResult sf2(std::span<const TaskMetrics> tasks, long m) { return run(tasks, m, sf2_at, "sf2"); }

}  // namespace parasched
