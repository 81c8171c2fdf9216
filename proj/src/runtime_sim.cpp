#include "parasched/runtime_sim.hpp"

#include <algorithm>
#include <list>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "parasched/io.hpp"

namespace parasched {

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::Start: return "start";
    case EventKind::Finish: return "finish";
    case EventKind::Split: return "split";
    case EventKind::Migrate: return "migrate";
    case EventKind::Deadline: return "deadline";
  }
  return "unknown";
}

nlohmann::json to_json(const SimEvent& e) {
  nlohmann::json j{{"time", rational_json(e.time)}, {"kind", event_name(e.kind)}, {"vertex", e.vertex}};
  if (e.processor >= 0) j["processor"] = e.processor;
  if (e.kind != EventKind::Finish) j["amount"] = rational_json(e.amount);
  return j;
}

std::vector<int> default_priority(const DagTask& task) {
  std::vector<int> order(static_cast<std::size_t>(task.original_size()));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

std::vector<int> random_priority(const DagTask& task, std::uint64_t seed) {
  auto order = default_priority(task);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

namespace {

// Precedence bookkeeping shared by the DAG simulators. Zero-WCET vertices
// (the dummies) complete the moment they become eligible.
class Progress {
 public:
  Progress(const DagTask& task, SimTrace& trace) : task_(task), trace_(trace) {
    waiting_.resize(task.size());
    for (int v = 0; v < task.size(); ++v) waiting_[v] = static_cast<int>(task.preds(v).size());
    done_.assign(task.size(), false);
    trace_.finish.assign(task.size(), Rational(0));
  }

  bool eligible(int v) const { return !done_[v] && waiting_[v] == 0; }
  bool all_done() const { return completed_ == task_.size(); }

  void complete(int v, const Rational& t) {
    done_[v] = true;
    ++completed_;
    trace_.finish[v] = t;
    trace_.response_time = std::max(trace_.response_time, t);
    for (int s : task_.succs(v)) --waiting_[s];
  }

  void settle_zero(const Rational& t) {
    for (bool again = true; again;) {
      again = false;
      for (int v = 0; v < task_.size(); ++v)
        if (task_.wcet(v) == 0 && eligible(v)) {
          complete(v, t);
          again = true;
        }
    }
  }

 private:
  const DagTask& task_;
  SimTrace& trace_;
  std::vector<int> waiting_;
  std::vector<bool> done_;
  int completed_ = 0;
};

std::list<int> initial_list(const DagTask& task, std::span<const int> priority) {
  std::list<int> order;
  std::vector<bool> seen(task.size(), false);
  for (int v : priority) {
    if (v < 0 || v >= task.original_size() || seen[v])
      throw Error(Errc::InvalidTask, "priority order repeats a vertex or names an unknown one");
    seen[v] = true;
    order.push_back(v);
  }
  for (int v = 0; v < task.original_size(); ++v)
    if (!seen[v]) order.push_back(v);
  return order;
}

}  // namespace

SimTrace simulate_uniform(const DagTask& task, const UniformPlatform& platform,
                          std::span<const int> priority, bool migration) {
  validate(task);
  SimTrace trace;
  Progress progress(task, trace);
  std::list<int> queue = initial_list(task, priority);
  const int m = platform.size();
  std::vector<int> running(m, -1);
  std::vector<Rational> remaining(task.size());
  std::vector<int> last_processor(task.size(), -1);
  for (int v = 0; v < task.size(); ++v) remaining[v] = task.wcet(v);

  Rational t = 0;
  for (;;) {
    progress.settle_zero(t);
    for (int p = 0; p < m; ++p) {
      if (running[p] >= 0) continue;
      auto it = std::find_if(queue.begin(), queue.end(), [&](int v) { return progress.eligible(v); });
      if (it == queue.end()) break;
      const int v = *it;
      queue.erase(it);
      running[p] = v;
      if (last_processor[v] >= 0 && last_processor[v] != p) {
        trace.events.push_back({t, EventKind::Migrate, v, p, remaining[v]});
        ++trace.migrations;
      } else if (last_processor[v] < 0) {
        trace.events.push_back({t, EventKind::Start, v, p, remaining[v]});
      }
      last_processor[v] = p;
    }
    if (progress.all_done()) break;

    std::optional<Rational> next;
    for (int p = 0; p < m; ++p)
      if (running[p] >= 0) {
        Rational end = t + remaining[running[p]] / platform.speed(p);
        if (!next || end < *next) next = end;
      }
    if (!next) throw std::logic_error("no runnable vertex before completion");
    Rational step = *next - t;
    for (int p = 0; p < m; ++p)
      if (running[p] >= 0) remaining[running[p]] -= step * platform.speed(p);
    t = *next;

    int fastest_freed = m;
    for (int p = 0; p < m; ++p) {
      const int v = running[p];
      if (v < 0 || remaining[v] != 0) continue;
      trace.events.push_back({t, EventKind::Finish, v, p, Rational(0)});
      progress.complete(v, t);
      running[p] = -1;
      fastest_freed = std::min(fastest_freed, p);
    }
    if (migration)
      for (int p = fastest_freed + 1; p < m; ++p)
        if (running[p] >= 0) {
          queue.push_front(running[p]);
          running[p] = -1;
        }
  }
  return trace;
}

SimTrace simulate_dispatcher(const DagTask& task, std::vector<Rational> loads,
                             std::span<const int> priority) {
  validate(task);
  if (loads.empty()) throw Error(Errc::InvalidTask, "dispatcher needs at least one container");
  std::sort(loads.begin(), loads.end(), std::greater<>());
  for (const auto& d : loads)
    if (d <= 0 || d > 1) throw Error(Errc::InvalidTask, "load bounds must lie in (0, 1]");

  struct Part {
    int vertex;
    Rational work;
    int prev;  // part that must finish first, or -1
    bool done = false;
  };

  SimTrace trace;
  Progress progress(task, trace);
  std::vector<Part> parts;
  std::vector<int> tail(task.size(), -1);  // latest part of each vertex
  std::list<int> queue;
  for (int v : initial_list(task, priority)) {
    tail[v] = static_cast<int>(parts.size());
    queue.push_back(tail[v]);
    parts.push_back({v, task.wcet(v), -1});
  }

  const int m = static_cast<int>(loads.size());
  std::vector<int> occupant(m, -1);
  std::vector<Rational> deadline(m);
  auto ready = [&](int k) {
    const Part& part = parts[k];
    return progress.eligible(part.vertex) && (part.prev < 0 || parts[part.prev].done);
  };

  Rational t = 0;
  for (;;) {
    progress.settle_zero(t);
    for (;;) {
      auto it = std::find_if(queue.begin(), queue.end(), ready);
      if (it == queue.end()) break;
      auto free = std::find(occupant.begin(), occupant.end(), -1);
      if (free == occupant.end()) break;
      const int k = *it;
      const int p = static_cast<int>(free - occupant.begin());
      queue.erase(it);

      Rational natural = t + parts[k].work / loads[p];
      std::optional<Rational> earlier;  // earliest deadline on a faster occupied container
      for (int q = 0; q < m; ++q)
        if (occupant[q] >= 0 && loads[q] > loads[p] && (!earlier || deadline[q] < *earlier))
          earlier = deadline[q];

      Rational d = natural;
      if (earlier && *earlier < natural) {
        d = *earlier;
        Rational head = (d - t) * loads[p];
        Rational rest = parts[k].work - head;
        parts[k].work = head;
        const int v = parts[k].vertex;
        tail[v] = static_cast<int>(parts.size());
        parts.push_back({v, rest, k});
        queue.push_front(tail[v]);
        ++trace.split_count;
        trace.events.push_back({t, EventKind::Split, v, p, rest});
      }
      occupant[p] = k;
      deadline[p] = d;
      trace.deadlines.push_back(d);
      trace.events.push_back({t, EventKind::Start, parts[k].vertex, p, parts[k].work});
      trace.events.push_back({t, EventKind::Deadline, parts[k].vertex, p, d});
    }
    if (progress.all_done()) break;

    std::optional<Rational> next;
    for (int p = 0; p < m; ++p)
      if (occupant[p] >= 0 && (!next || deadline[p] < *next)) next = deadline[p];
    if (!next) throw std::logic_error("dispatcher stalled");
    t = *next;
    for (int p = 0; p < m; ++p) {
      const int k = occupant[p];
      if (k < 0 || deadline[p] != t) continue;
      // A part of work c placed at s with deadline d runs at rate delta_p and
      // ends exactly at d = s + c / delta_p.
      parts[k].done = true;
      occupant[p] = -1;
      const int v = parts[k].vertex;
      if (tail[v] == k) {
        trace.events.push_back({t, EventKind::Finish, v, p, Rational(0)});
        progress.complete(v, t);
      }
    }
  }
  return trace;
}

Rational default_horizon(std::span<const DecomposedTask> tasks) {
  Rational longest = 0;
  for (const auto& dt : tasks) longest = std::max(longest, dt.period);
  return longest * 10;
}

MissReport simulate_gedf(std::span<const DecomposedTask> tasks, int m, const Rational& horizon) {
  if (m < 1) throw Error(Errc::InvalidTask, "GEDF needs at least one processor");
  struct Job {
    Rational release;
    Rational deadline;
    Rational remaining;
    std::size_t task;
    int vertex;
    long instance;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& dt = tasks[i];
    for (long k = 0;; ++k) {
      Rational base = dt.period * k;
      if (base >= horizon) break;
      for (const auto& s : dt.subtasks) {
        Rational r = base + s.release;
        if (r < horizon) jobs.push_back({r, base + s.deadline, s.wcet, i, s.vertex, k});
      }
    }
  }
  std::stable_sort(jobs.begin(), jobs.end(),
                   [](const Job& a, const Job& b) { return a.release < b.release; });

  auto before = [](const Job& a, const Job& b) {
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    if (a.task != b.task) return a.task < b.task;
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    return a.instance < b.instance;
  };

  MissReport report;
  report.horizon = horizon;
  report.jobs = static_cast<long>(jobs.size());
  std::vector<Job> active;
  std::size_t next_release = 0;
  Rational t = 0;
  while (next_release < jobs.size() || !active.empty()) {
    if (active.empty() && jobs[next_release].release > t) t = jobs[next_release].release;
    while (next_release < jobs.size() && jobs[next_release].release <= t)
      active.push_back(jobs[next_release++]);

    const std::size_t run = std::min<std::size_t>(active.size(), static_cast<std::size_t>(m));
    std::partial_sort(active.begin(), active.begin() + static_cast<long>(run), active.end(), before);
    Rational next = t + active.front().remaining;
    for (std::size_t j = 1; j < run; ++j) next = std::min<Rational>(next, t + active[j].remaining);
    if (next_release < jobs.size()) next = std::min(next, jobs[next_release].release);

    Rational step = next - t;
    for (std::size_t j = 0; j < run; ++j) active[j].remaining -= step;
    t = next;
    for (std::size_t j = 0; j < active.size();) {
      if (active[j].remaining == 0) {
        if (t > active[j].deadline)
          report.misses.push_back(
              {active[j].task, active[j].vertex, active[j].instance, active[j].deadline, t});
        active[j] = std::move(active.back());
        active.pop_back();
      } else {
        ++j;
      }
    }
  }
  return report;
}

}  // namespace parasched
