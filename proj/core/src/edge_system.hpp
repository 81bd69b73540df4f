#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lgp/solver.hpp"

namespace lgp::detail {

// Edge-difference operator of a NonlocalProblem: Delta = D u + b over kernel
// edges, with u on interior slots and b carrying the fixed halo values.
struct EdgeSystem {
  explicit EdgeSystem(const NonlocalProblem& problem);

  const NonlocalProblem& problem;
  std::size_t slots = 0;
  std::vector<std::int32_t> sa, sb;  // interior slot of each endpoint, -1 on the halo
  std::vector<double> c;             // nu * weight
  std::vector<double> b;
  std::vector<std::uint32_t> coupled;  // edges with an interior endpoint
  double constant_energy = 0.0;        // halo-halo edges

  // out[e] = (D u)[e] + (with_b ? b[e] : 0) on coupled edges.
  void apply(std::span<const double> u, std::span<double> out, bool with_b) const;
  // out[s] = sum over edges at slot s of sign * y[e] (+1 if s is endpoint b, -1 if a).
  void apply_transpose(std::span<const double> y, std::span<double> out) const;
  // Preconditioned CG for (D^T diag(a) D) u = -D^T (a b). Returns iterations used.
  std::size_t solve_weighted_laplacian(std::span<const double> a, std::span<double> u, double tol,
                                       std::size_t max_iter) const;
  double energy(std::span<const double> u) const;  // sum c |Delta| + constant part
};

}  // namespace lgp::detail
