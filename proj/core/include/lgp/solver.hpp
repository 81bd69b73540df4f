#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgp/functionals.hpp"

namespace lgp {

/// Minimize J_psi over u on interior points with halo values fixed to psi.
class NonlocalProblem {
 public:
  /// Samples psi at halo points. Throws invalid_argument on non-finite values or a kernel/domain mismatch.
  NonlocalProblem(const DiscreteDomain& domain, const WalkKernel& kernel, const BoundaryDatum& psi);

  const DiscreteDomain& domain() const { return *domain_; }
  const WalkKernel& kernel() const { return *kernel_; }
  /// psi on halo points, 0 on interior points.
  std::span<const double> halo_values() const { return psi_; }
  /// Range of psi over the walk boundary (active halo points).
  double psi_min() const { return lo_; }
  double psi_max() const { return hi_; }
  double psi_sup_norm() const { return std::max(std::abs(lo_), std::abs(hi_)); }
  /// Edges with |Delta| at or below this are unconstrained in sign checks.
  double tie_tolerance() const { return 1e-9 * psi_sup_norm(); }
  bool binary_datum() const;

  std::vector<double> extend(std::span<const double> u_interior) const;

 private:
  const DiscreteDomain* domain_;
  const WalkKernel* kernel_;
  std::vector<double> psi_;
  double lo_ = 0.0, hi_ = 0.0;
};

/// Antisymmetric dual field: g[e] = g(a, b) for kernel edge e = (a, b); g(b, a) = -g[e].
struct DualField {
  std::vector<double> g;
};

struct SolveParams {
  std::size_t max_iter = 200000;
  double tol = 1e-6;
  enum class StepRule { Constant, AdaptiveRestart } step_rule = StepRule::AdaptiveRestart;
  std::size_t check_every = 64;
  int power_iterations = 50;
  bool warm_start = true;
  std::uint64_t seed = 1;
};

struct SolveReport {
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  double primal_energy = 0.0;
  double dual_energy = 0.0;
  double gap = 0.0;
  double relative_gap = 0.0;
  double row_residual = 0.0;
  double sign_residual = 0.0;
  double operator_norm = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
};

struct NonlocalSolution {
  std::vector<double> u;       ///< interior values, ordered as domain.interior()
  std::vector<double> u_psi;   ///< all points
  DualField dual;
  SolveReport report;
};

/// First-order primal-dual (Chambolle-Pock) minimization of J_psi with a per-edge clipped dual.
NonlocalSolution solve_primal_dual(const NonlocalProblem& problem, const SolveParams& params = {});

struct PLaplaceParams {
  double p = 2.0;
  double tol = 1e-9;
  double delta = 1e-6;  ///< smoothing of |t|^{p-2} as (t^2 + delta^2)^{(p-2)/2}
  std::size_t max_iter = 500;
  std::size_t cg_max_iter = 5000;
  double cg_tol = 1e-12;
};

struct PLaplaceResult {
  std::vector<double> u;  ///< interior values
  std::size_t iterations = 0;
  double residual = 0.0;  ///< max_x |sum_y m_x(y) phi(Delta) Delta| over interior rows
  bool converged = false;
};

/// Smoothed nonlocal p-Laplacian by iteratively reweighted least squares; p in (1, 3].
PLaplaceResult solve_plaplace(const NonlocalProblem& problem, const PLaplaceParams& params,
                              std::span<const double> initial = {});

struct MinCutResult {
  double energy = 0.0;
  std::vector<double> u;  ///< interior values in {0, 1}
  DualField dual;         ///< flow certificate g = -flow / capacity
};

/// Exact minimum of J_psi for psi in {0, 1} by maximum flow. Throws invalid_argument on non-binary psi.
MinCutResult mincut_oracle(const NonlocalProblem& problem);

struct CertificateReport {
  double antisymmetry = 0.0;  ///< zero by storage
  double bound_excess = 0.0;  ///< max(|g| - 1, 0)
  double row_residual = 0.0;  ///< max over interior x of |sum_y m_x(y) g(x, y)|
  double sign_defect = 0.0;   ///< max |g Delta - |Delta|| over edges with |Delta| > tie tolerance
  bool passed = false;
};

CertificateReport check_certificate(const NonlocalProblem& problem, std::span<const double> u_psi,
                                    const DualField& g, double tol);

/// Energy J_psi of interior values u.
double problem_energy(const NonlocalProblem& problem, std::span<const double> u_interior);

}  // namespace lgp
