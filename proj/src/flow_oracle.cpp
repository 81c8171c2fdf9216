#include <deque>
#include <optional>

#include "parasched/decomposition.hpp"

namespace parasched {

namespace {

// Dense residual network; instances are tiny.
class FlowNetwork {
 public:
  explicit FlowNetwork(int n) : n_(n), cap_(n, std::vector<Rational>(n, Rational(0))) {}

  void add(int from, int to, const Rational& c) { cap_[from][to] += c; }

  Rational max_flow(int s, int t) {
    Rational total = 0;
    for (;;) {
      std::vector<int> parent(n_, -1);
      parent[s] = s;
      std::deque<int> queue{s};
      while (!queue.empty() && parent[t] < 0) {
        int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < n_; ++v)
          if (parent[v] < 0 && cap_[u][v] > 0) {
            parent[v] = u;
            queue.push_back(v);
          }
      }
      if (parent[t] < 0) return total;
      Rational push = cap_[parent[t]][t];
      for (int v = t; v != s; v = parent[v]) push = std::min(push, cap_[parent[v]][v]);
      for (int v = t; v != s; v = parent[v]) {
        cap_[parent[v]][v] -= push;
        cap_[v][parent[v]] += push;
      }
      total += push;
    }
  }

 private:
  int n_;
  std::vector<std::vector<Rational>> cap_;
};

}  // namespace

OracleResult segmentation_oracle(const DagTask& task, const TimingDiagram& td,
                                 const std::vector<Segment>& segments, std::size_t max_vertices) {
  if (static_cast<std::size_t>(task.original_size()) > max_vertices)
    throw Error(Errc::OracleTooLarge, "oracle limited to " + std::to_string(max_vertices) +
                                          " vertices, task has " +
                                          std::to_string(task.original_size()));
  Rational work = 0;
  for (int v = 0; v < task.original_size(); ++v) work += task.wcet(v);
  const Rational threshold = work / td.length;

  const int nv = task.original_size();
  const int ns = static_cast<int>(segments.size());
  const int source = 0, sink = 1 + nv + ns;
  FlowNetwork net(sink + 1);
  for (int v = 0; v < nv; ++v) {
    net.add(source, 1 + v, task.wcet(v));
    for (int x = 0; x < ns; ++x)
      if (segments[x].start >= td.ready[v] && segments[x].end <= td.finish[v])
        net.add(1 + v, 1 + nv + x, task.wcet(v));
  }
  for (int x = 0; x < ns; ++x) net.add(1 + nv + x, sink, segments[x].length * threshold);

  OracleResult out;
  out.max_assignable = net.max_flow(source, sink);
  out.overflow = work - out.max_assignable;
  out.omega_opt = 1 + out.overflow / work;
  return out;
}

}  // namespace parasched
