#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "edge_system.hpp"
#include "lgp/parallel.hpp"
#include "lgp/solver.hpp"

namespace lgp {

namespace {

// Dinic's algorithm on an undirected capacitated graph with real capacities.
class Dinic {
 public:
  explicit Dinic(std::size_t nodes) : head_(nodes, -1), level_(nodes), iter_(nodes) {}

  // Undirected edge: both arcs carry capacity cap. Returns the id of the u->v arc.
  std::size_t add_undirected(std::size_t u, std::size_t v, double cap) {
    const std::size_t id = to_.size();
    push(u, v, cap);
    push(v, u, cap);
    return id;
  }

  double flow_on(std::size_t arc) const { return cap0_[arc] - cap_[arc]; }

  double run(std::size_t s, std::size_t t, double eps) {
    double total = 0.0;
    while (bfs(s, t, eps)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      for (std::size_t v = 0; v < head_.size(); ++v) iter_[v] = head_[v];
      for (;;) {
        const double f = augment(s, t, eps);
        if (f <= 0.0) break;
        total += f;
      }
    }
    return total;
  }

  // Nodes reachable from s in the residual graph.
  std::vector<char> source_side(std::size_t s, double eps) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (long a = head_[v]; a >= 0; a = next_[static_cast<std::size_t>(a)]) {
        const auto w = to_[static_cast<std::size_t>(a)];
        if (!seen[w] && cap_[static_cast<std::size_t>(a)] > eps) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return seen;
  }

 private:
  void push(std::size_t u, std::size_t v, double cap) {
    to_.push_back(v);
    cap_.push_back(cap);
    cap0_.push_back(cap);
    next_.push_back(head_[u]);
    head_[u] = static_cast<long>(to_.size() - 1);
  }

  bool bfs(std::size_t s, std::size_t t, double eps) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (long a = head_[v]; a >= 0; a = next_[static_cast<std::size_t>(a)]) {
        const auto w = to_[static_cast<std::size_t>(a)];
        if (level_[w] < 0 && cap_[static_cast<std::size_t>(a)] > eps) {
          level_[w] = level_[v] + 1;
          q.push(w);
        }
      }
    }
    return level_[t] >= 0;
  }

  // One blocking-flow path found by iterative DFS over the level graph.
  double augment(std::size_t s, std::size_t t, double eps) {
    std::vector<std::size_t> path_arcs;
    std::size_t v = s;
    for (;;) {
      if (v == t) {
        double f = std::numeric_limits<double>::infinity();
        for (auto a : path_arcs) f = std::min(f, cap_[a]);
        for (auto a : path_arcs) {
          cap_[a] -= f;
          cap_[a ^ 1U] += f;
        }
        return f;
      }
      bool advanced = false;
      for (long& a = iter_[v]; a >= 0; a = next_[static_cast<std::size_t>(a)]) {
        const auto au = static_cast<std::size_t>(a);
        const auto w = to_[au];
        if (cap_[au] > eps && level_[w] == level_[v] + 1) {
          path_arcs.push_back(au);
          v = w;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      // Dead end: prune v and retreat.
      level_[v] = -1;
      if (path_arcs.empty()) return 0.0;
      const std::size_t back = path_arcs.back();
      path_arcs.pop_back();
      v = to_[back ^ 1U];
      iter_[v] = next_[back];
    }
  }

  std::vector<long> head_;
  std::vector<std::size_t> to_;
  std::vector<double> cap_, cap0_;
  std::vector<long> next_;
  std::vector<int> level_;
  std::vector<long> iter_;
};

}  // namespace

MinCutResult mincut_oracle(const NonlocalProblem& problem) {
  if (!problem.binary_datum()) throw std::invalid_argument("min-cut oracle needs a boundary datum with values in {0, 1}");
  const detail::EdgeSystem sys(problem);
  const auto edges = problem.kernel().edges();
  const auto psi = problem.halo_values();
  const std::size_t n = sys.slots;
  const std::size_t source = n, sink = n + 1;

  auto node_of = [&](std::uint32_t point, std::int32_t slot) -> std::size_t {
    if (slot >= 0) return static_cast<std::size_t>(slot);
    return psi[point] == 1.0 ? source : sink;
  };

  Dinic graph(n + 2);
  double max_cap = 0.0;
  for (auto e : sys.coupled) max_cap = std::max(max_cap, sys.c[e]);
  std::vector<std::size_t> arc(edges.size(), 0);
  std::vector<char> in_graph(edges.size(), 0);
  for (auto e : sys.coupled) {
    const std::size_t u = node_of(edges[e].a, sys.sa[e]);
    const std::size_t v = node_of(edges[e].b, sys.sb[e]);
    if (u == v) continue;
    arc[e] = graph.add_undirected(u, v, sys.c[e]);
    in_graph[e] = 1;
  }
  const double eps = 1e-14 * max_cap;
  MinCutResult res;
  res.energy = graph.run(source, sink, eps) + sys.constant_energy;

  const auto side = graph.source_side(source, eps);
  res.u.resize(n);
  for (std::size_t s = 0; s < n; ++s) res.u[s] = side[s] ? 1.0 : 0.0;

  res.dual.g.assign(edges.size(), 0.0);
  const double tie = problem.tie_tolerance();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (in_graph[e]) {
      res.dual.g[e] = std::clamp(-graph.flow_on(arc[e]) / sys.c[e], -1.0, 1.0);
    } else if (sys.sa[e] < 0 && sys.sb[e] < 0) {
      res.dual.g[e] = std::abs(sys.b[e]) <= tie ? 0.0 : (sys.b[e] > 0 ? 1.0 : -1.0);
    }
  }
  return res;
}

}  // namespace lgp
