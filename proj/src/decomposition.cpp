#include "parasched/decomposition.hpp"

#include <algorithm>
#include <list>
#include <map>
#include <stdexcept>

namespace parasched {

TimingDiagram timing_diagram(const DagTask& task) {
  const auto& order = task.topological_order();
  TimingDiagram td;
  td.ready.assign(task.size(), Rational(0));
  td.finish.assign(task.size(), Rational(0));
  for (int v : order) {
    Rational r = 0;
    for (int p : task.preds(v)) r = std::max<Rational>(r, td.ready[p] + task.wcet(p));
    td.ready[v] = r;
    td.length = std::max<Rational>(td.length, r + task.wcet(v));
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (task.succs(v).empty()) {
      td.finish[v] = td.length;
      continue;
    }
    Rational f = td.ready[task.succs(v).front()];
    for (int s : task.succs(v)) f = std::min(f, td.ready[s]);
    td.finish[v] = f;
  }
  return td;
}

std::vector<Segment> build_segments(const TimingDiagram& td) {
  if (td.length <= 0) throw Error(Errc::DegenerateWindow, "critical path length is zero");
  std::vector<Rational> points{Rational(0), td.length};
  points.insert(points.end(), td.ready.begin(), td.ready.end());
  points.insert(points.end(), td.finish.begin(), td.finish.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Segment s;
    s.index = static_cast<int>(i);
    s.start = points[i];
    s.end = points[i + 1];
    s.length = s.end - s.start;
    segments.push_back(std::move(s));
  }
  return segments;
}

namespace {

int boundary_index(const std::vector<Segment>& segments, const Rational& t) {
  if (t == segments.back().end) return static_cast<int>(segments.size());
  auto it = std::lower_bound(segments.begin(), segments.end(), t,
                             [](const Segment& s, const Rational& x) { return s.start < x; });
  if (it == segments.end() || it->start != t)
    throw std::logic_error("time point is not a segment boundary");
  return static_cast<int>(it - segments.begin());
}

struct Pending {
  int vertex;
  Rational remaining;
};

}  // namespace

SegmentationResult segment_workload(const DagTask& task, const TimingDiagram& td,
                                    std::vector<Segment> segments) {
  SegmentationResult out;
  for (int v = 0; v < task.original_size(); ++v) out.work += task.wcet(v);
  out.critical_path = td.length;
  out.threshold = out.work / out.critical_path;

  const int nseg = static_cast<int>(segments.size());
  // Covered segments of v are [first[v], last[v]).
  std::vector<int> first(task.size()), last(task.size());
  for (int v = 0; v < task.size(); ++v) {
    first[v] = boundary_index(segments, td.ready[v]);
    last[v] = boundary_index(segments, td.finish[v]);
  }

  std::vector<std::map<int, Rational>> portion(task.size());  // vertex -> segment -> amount
  std::vector<Rational> capacity(nseg);
  for (int x = 0; x < nseg; ++x) {
    segments[x].work = 0;
    capacity[x] = out.threshold * segments[x].length;
  }
  auto place = [&](int v, int x, const Rational& amount) {
    portion[v][x] += amount;
    segments[x].work += amount;
  };

  // S: unassigned vertices by latest finish time, ties by vertex id.
  std::vector<int> by_finish;
  for (int v = 0; v < task.size(); ++v)
    if (task.wcet(v) > 0) by_finish.push_back(v);
  std::stable_sort(by_finish.begin(), by_finish.end(),
                   [&](int a, int b) { return td.finish[a] < td.finish[b]; });

  // Phase 1: vertices covering a single segment.
  std::list<Pending> pending;
  for (int v : by_finish) {
    if (last[v] - first[v] == 1) place(v, first[v], task.wcet(v));
    else pending.push_back({v, task.wcet(v)});
  }

  // Phase 2: fill light segments in time order up to the threshold, earliest
  // finish time first. A split remainder keeps its finish time and therefore
  // its place in S.
  for (int x = 0; x < nseg; ++x) {
    if (segments[x].work >= capacity[x]) continue;
    for (auto it = pending.begin(); it != pending.end();) {
      const int v = it->vertex;
      if (first[v] > x || last[v] <= x) {
        ++it;
        continue;
      }
      Rational room = capacity[x] - segments[x].work;
      if (it->remaining <= room) {
        place(v, x, it->remaining);
        it = pending.erase(it);
        if (it != pending.end() && segments[x].work == capacity[x]) break;
        continue;
      }
      place(v, x, room);
      it->remaining -= room;
      break;
    }
  }

  // Phase 3: leftovers go to covered segments, earliest first, at most e(s)
  // of one vertex per segment.
  for (auto& item : pending) {
    const int v = item.vertex;
    for (int x = first[v]; x < last[v] && item.remaining > 0; ++x) {
      Rational room = segments[x].length;
      if (auto found = portion[v].find(x); found != portion[v].end()) room -= found->second;
      if (room <= 0) continue;
      Rational take = std::min(room, item.remaining);
      place(v, x, take);
      item.remaining -= take;
    }
    if (item.remaining > 0)
      throw Error(Errc::InfeasibleLeftover,
                  "vertex " + std::to_string(v) + " of task '" + task.id() + "' does not fit");
  }

  out.assignment.assign(nseg, {});
  int parts = 0, vertices = 0;
  for (int v = 0; v < task.size(); ++v) {
    if (portion[v].empty()) continue;
    ++vertices;
    parts += static_cast<int>(portion[v].size());
    for (const auto& [x, amount] : portion[v]) out.assignment[x].push_back({v, amount});
  }
  out.split_count = parts - vertices;

  for (auto& s : segments) {
    s.heavy = s.work > out.threshold * s.length;
    if (s.heavy) out.heavy_work += s.work;
    else out.light_length += s.length;
  }
  out.omega = out.heavy_work / out.work + out.light_length / out.critical_path;
  out.segments = std::move(segments);
  return out;
}

LaxityResult distribute_laxity(const DagTask& task, const SegmentationResult& seg) {
  LaxityResult out;
  out.params = {seg.omega, seg.omega};
  out.segments = seg.segments;
  const Rational& horizon = task.deadline();
  Rational total = 0;
  for (auto& s : out.segments) {
    if (s.heavy) s.stretched = s.work * horizon / (out.params.lambda * seg.work);
    else s.stretched = s.length * horizon / (out.params.rho * seg.critical_path);
    total += s.stretched;
  }
  if (total != horizon) throw std::logic_error("stretched segments do not sum to the deadline");
  return out;
}

Rational DecomposedTask::work() const {
  Rational c = 0;
  for (const auto& s : subtasks) c += s.wcet;
  return c;
}

Rational DecomposedTask::max_density() const {
  Rational d = 0;
  for (const auto& s : subtasks) d = std::max<Rational>(d, s.density());
  return d;
}

DecomposedTask reassemble(const DagTask& task, const TimingDiagram& td,
                          const std::vector<Segment>& stretched) {
  std::vector<Rational> position(stretched.size() + 1);
  for (std::size_t i = 0; i < stretched.size(); ++i)
    position[i + 1] = position[i] + stretched[i].stretched;

  DecomposedTask out;
  out.task_id = task.id();
  out.period = task.period();
  for (int v = 0; v < task.original_size(); ++v) {
    Subtask s;
    s.vertex = v;
    s.release = position[boundary_index(stretched, td.ready[v])];
    s.deadline = position[boundary_index(stretched, td.finish[v])];
    s.wcet = task.wcet(v);
    out.subtasks.push_back(std::move(s));
  }
  return out;
}

namespace {

struct Job {
  Rational release;
  Rational deadline;
  Rational wcet;
};

std::vector<Job> unroll(const DecomposedTask& dt, long instances) {
  std::vector<Job> jobs;
  for (long k = 0; k < instances; ++k) {
    Rational shift = dt.period * k;
    for (const auto& s : dt.subtasks)
      jobs.push_back({s.release + shift, s.deadline + shift, s.wcet});
  }
  return jobs;
}

std::vector<Rational> distinct_releases(const DecomposedTask& dt) {
  std::vector<Rational> r;
  for (const auto& s : dt.subtasks) r.push_back(s.release);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

}  // namespace

Rational demand_bound(const DecomposedTask& dt, const Rational& t) {
  if (t <= 0 || dt.subtasks.empty()) return 0;
  // The pattern repeats every period, so interval starts at first-instance
  // releases cover every case.
  const long instances = floor_long(t / dt.period) + 2;
  const auto jobs = unroll(dt, instances);
  Rational best = 0;
  for (const auto& a : distinct_releases(dt)) {
    Rational b = a + t;
    Rational w = 0;
    for (const auto& j : jobs)
      if (j.release >= a && j.deadline <= b) w += j.wcet;
    best = std::max(best, w);
  }
  return best;
}

LoadResult dbf_and_load(const DecomposedTask& dt) {
  LoadResult out;
  if (dt.subtasks.empty()) return out;
  // dbf(t + T) = dbf(t) + C once t >= T, so the ratio past 2T is a mediant of
  // smaller windows and C/T; intervals may start at a first-instance release
  // and end at a deadline of instance 0, 1 or 2.
  const auto jobs = unroll(dt, 3);
  const Rational span = dt.period * 2;
  out.load = dt.work() / dt.period;
  out.window = dt.period;
  for (const auto& a : distinct_releases(dt)) {
    std::vector<const Job*> inside;
    for (const auto& j : jobs)
      if (j.release >= a && j.deadline - a <= span) inside.push_back(&j);
    std::sort(inside.begin(), inside.end(),
              [](const Job* x, const Job* y) { return x->deadline < y->deadline; });
    Rational w = 0;
    for (std::size_t i = 0; i < inside.size(); ++i) {
      w += inside[i]->wcet;
      if (i + 1 < inside.size() && inside[i + 1]->deadline == inside[i]->deadline) continue;
      Rational t = inside[i]->deadline - a;
      Rational ratio = w / t;
      if (ratio > out.load) {
        out.load = ratio;
        out.window = t;
      }
    }
  }
  return out;
}

Decomposition decompose(const DagTask& task, bool with_load) {
  Decomposition d;
  d.metrics = validate(task);
  if (d.metrics.critical_path > d.metrics.deadline)
    throw Error(Errc::CriticalPathExceedsDeadline, "task '" + task.id() + "' has L > D");
  d.timing = timing_diagram(task);
  d.segmentation = segment_workload(task, d.timing, build_segments(d.timing));
  d.laxity = distribute_laxity(task, d.segmentation);
  d.task = reassemble(task, d.timing, d.laxity.segments);
  if (with_load) d.load = dbf_and_load(d.task);
  d.max_density = d.task.max_density();
  return d;
}

Rational structure_value(const DagTask& task) {
  TimingDiagram td = timing_diagram(task);
  return segment_workload(task, td, build_segments(td)).omega;
}

}  // namespace parasched
