#include "edge_system.hpp"

#include <cmath>

#include "lgp/parallel.hpp"

namespace lgp::detail {

namespace {
constexpr std::size_t kChunk = 4096;

double dot(std::span<const double> x, std::span<const double> y) {
  return parallel_sum(x.size(), kChunk, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i] * y[i];
    return s;
  });
}
}  // namespace

EdgeSystem::EdgeSystem(const NonlocalProblem& prob) : problem(prob) {
  const auto& dom = prob.domain();
  const auto edges = prob.kernel().edges();
  const auto psi = prob.halo_values();
  slots = dom.interior().size();
  sa.resize(edges.size());
  sb.resize(edges.size());
  c.resize(edges.size());
  b.assign(edges.size(), 0.0);
  CompensatedSum fixed;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    sa[e] = dom.interior_slot(edges[e].a);
    sb[e] = dom.interior_slot(edges[e].b);
    c[e] = dom.cell_measure() * edges[e].weight;
    if (sb[e] < 0) b[e] += psi[edges[e].b];
    if (sa[e] < 0) b[e] -= psi[edges[e].a];
    if (sa[e] < 0 && sb[e] < 0)
      fixed.add(c[e] * std::abs(b[e]));
    else
      coupled.push_back(static_cast<std::uint32_t>(e));
  }
  constant_energy = fixed.value();
}

void EdgeSystem::apply(std::span<const double> u, std::span<double> out, bool with_b) const {
  parallel_for(coupled.size(), kChunk, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const std::uint32_t e = coupled[k];
      double d = with_b ? b[e] : 0.0;
      if (sb[e] >= 0) d += u[static_cast<std::size_t>(sb[e])];
      if (sa[e] >= 0) d -= u[static_cast<std::size_t>(sa[e])];
      out[e] = d;
    }
  });
}

void EdgeSystem::apply_transpose(std::span<const double> y, std::span<double> out) const {
  const auto& dom = problem.domain();
  const auto& ker = problem.kernel();
  const auto interior = dom.interior();
  const auto edges = ker.edges();
  parallel_for(slots, kChunk / 16, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      const std::uint32_t i = interior[s];
      double acc = 0.0;
      for (const auto& nb : ker.row(i)) acc += edges[nb.edge].b == i ? y[nb.edge] : -y[nb.edge];
      out[s] = acc;
    }
  });
}

std::size_t EdgeSystem::solve_weighted_laplacian(std::span<const double> a, std::span<double> u, double tol,
                                                 std::size_t max_iter) const {
  const std::size_t ne = c.size();
  std::vector<double> y(ne, 0.0), r(slots), z(slots), p(slots), q(slots), diag(slots, 0.0);
  // Jacobi preconditioner.
  for (auto e : coupled) {
    if (sa[e] >= 0) diag[static_cast<std::size_t>(sa[e])] += a[e];
    if (sb[e] >= 0) diag[static_cast<std::size_t>(sb[e])] += a[e];
  }
  auto op = [&](std::span<const double> x, std::span<double> out, bool with_b) {
    apply(x, y, with_b);
    for (auto e : coupled) y[e] *= a[e];
    apply_transpose(y, out);
  };
  // r = -(D^T a (D u + b)).
  op(u, r, true);
  for (auto& v : r) v = -v;
  std::vector<double> rhs_probe(slots, 0.0);
  const double r0 = std::sqrt(dot(r, r));
  std::vector<double> zero(slots, 0.0);
  op(zero, rhs_probe, true);
  const double bnorm = std::max(std::sqrt(dot(rhs_probe, rhs_probe)), 1e-300);
  if (r0 <= tol * bnorm) return 0;
  for (std::size_t s = 0; s < slots; ++s) z[s] = diag[s] > 0 ? r[s] / diag[s] : r[s];
  p = z;
  double rz = dot(r, z);
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    op(p, q, false);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (std::size_t s = 0; s < slots; ++s) {
      u[s] += alpha * p[s];
      r[s] -= alpha * q[s];
    }
    if (std::sqrt(dot(r, r)) <= tol * bnorm) {
      ++it;
      break;
    }
    for (std::size_t s = 0; s < slots; ++s) z[s] = diag[s] > 0 ? r[s] / diag[s] : r[s];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t s = 0; s < slots; ++s) p[s] = z[s] + beta * p[s];
  }
  return it;
}

double EdgeSystem::energy(std::span<const double> u) const {
  std::vector<double> d(c.size(), 0.0);
  apply(u, d, true);
  const double s = parallel_sum(coupled.size(), kChunk, [&](std::size_t lo, std::size_t hi) {
    CompensatedSum acc;
    for (std::size_t k = lo; k < hi; ++k) acc.add(c[coupled[k]] * std::abs(d[coupled[k]]));
    return acc.value();
  });
  return s + constant_energy;
}

}  // namespace lgp::detail
