#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lgp/lattice.hpp"

namespace lgp {

/// Unordered kernel edge, a < b. weight = m_a(b) = m_b(a).
struct KernelEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 0.0;
};

struct KernelNeighbor {
  std::uint32_t point = 0;
  std::uint32_t edge = 0;
};

/**
 * Sparse epsilon-step random walk on the active points of a DiscreteDomain.
 *
 * Cells are credited to the ball U(x, eps) with the tie fraction theta of
 * for_each_ball_cell. Every edge carries weight h^n theta / M, where M is
 * the largest discrete ball mass over active rows, so the weight matrix is
 * symmetric. The remainder of each row (self cell, any deficit against M,
 * and mass falling on non-active cells) is kept as a self-loop, making every
 * row sum to 1.
 */
class WalkKernel {
 public:
  double eps() const { return eps_; }
  std::size_t num_points() const { return self_weight_.size(); }
  bool has_row(std::size_t i) const { return has_row_[i] != 0; }

  std::span<const KernelEdge> edges() const { return edges_; }
  std::span<const KernelNeighbor> row(std::size_t i) const {
    return {neighbors_.data() + row_ptr_[i], neighbors_.data() + row_ptr_[i + 1]};
  }
  /// Tie fraction theta of an edge, recovered from its weight.
  double theta(const KernelEdge& e) const { return e.weight * reference_mass_ / cell_measure_; }

  double self_weight(std::size_t i) const { return self_weight_[i]; }
  /// Part of row i's discrete ball mass that falls on non-active lattice cells (as a weight).
  double exterior_weight(std::size_t i) const { return exterior_weight_[i]; }
  double row_sum(std::size_t i) const;

  /// Discrete ball mass sum_y h^n theta of row i, self cell included.
  double ball_mass(std::size_t i) const { return ball_mass_[i]; }
  /// ball_mass(i) / (2^n eps^Q); NaN for points without a row.
  double mass_ratio(std::size_t i) const { return ball_mass_[i] / analytic_mass_; }
  double reference_mass() const { return reference_mass_; }
  double analytic_mass() const { return analytic_mass_; }
  double cell_measure() const { return cell_measure_; }
  double min_mass_ratio() const;
  double max_mass_ratio() const;

 private:
  friend WalkKernel build_kernel(const CarnotGroup&, const DiscreteDomain&, double);

  double eps_ = 0.0;
  double cell_measure_ = 0.0;
  double reference_mass_ = 0.0;
  double analytic_mass_ = 0.0;
  std::vector<KernelEdge> edges_;
  std::vector<std::size_t> row_ptr_;
  std::vector<KernelNeighbor> neighbors_;
  std::vector<std::uint8_t> has_row_;
  std::vector<double> self_weight_, exterior_weight_, ball_mass_;
};

/// Errors: group or eps differing from the domain's -> invalid_argument; a row without neighbours -> ConstructionError.
WalkKernel build_kernel(const CarnotGroup& group, const DiscreteDomain& domain, double eps);

/// Discrete mass sum h^n theta of the ball U(x, eps) on the infinite lattice of spacing h, x included.
double discrete_ball_mass(const CarnotGroup& group, double h, const LatticeIndex& x, double eps);

}  // namespace lgp
