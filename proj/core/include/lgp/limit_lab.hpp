#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgp/polynomial.hpp"
#include "lgp/solver.hpp"

namespace lgp {

// ---------------------------------------------------------------- sweeps

enum class EstimateRegion {
  OmegaM,  ///< active set: interior plus walk boundary
  Omega1,  ///< every stored point, i.e. the full halo_width band
};

struct SweepPlan {
  CarnotGroup group = CarnotGroup::abelian(1);
  DomainSpec domain = DomainSpec::box({0.0}, {1.0}, 1.0);
  BoundaryDatum psi = BoundaryDatum::constant(0.0);
  std::vector<double> eps;  ///< strictly decreasing, each <= halo width
  double rho = 10.0;        ///< h = eps / rho, rho >= 2
  bool halo_tracks_eps = false;  ///< use halo width eps for each entry instead of the domain's width
  SolveParams solver;
  EstimateRegion region = EstimateRegion::OmegaM;
  /// Reference solution for the L1 distance column; optional.
  std::function<double(std::span<const double>)> reference;
};

struct SweepEntry {
  double eps = 0.0;
  double h = 0.0;
  std::size_t points = 0, interior = 0, active = 0, edges = 0;
  double energy = 0.0;           ///< J_psi of the solution
  double rescaled_energy = 0.0;  ///< 4/eps * J_psi
  double interior_energy = 0.0;  ///< rows of J_psi owned by interior points
  double rescaled_interior_energy = 0.0;
  double mass_ratio_min = 0.0, mass_ratio_max = 0.0;
  double uniform_estimate = 0.0;  ///< M_eps
  double l1_distance = 0.0;       ///< NaN without a reference
  SolveReport solve;
  CertificateReport certificate;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  bool all_converged = false;
};

/// Per-entry hook with full access to the discrete objects (used to write per-eps artifacts).
using SweepObserver = std::function<void(const SweepEntry&, const NonlocalProblem&, const NonlocalSolution&)>;

/// Throws invalid_argument for an invalid plan (fewer than one eps, non-decreasing list, rho < 2, eps > halo width).
SweepResult sweep_epsilon(const SweepPlan& plan, const SweepObserver& observer = {});

/// Rescale factor 2^(n+1) / (C_G eps) = 4 / eps.
double rescale_factor(const CarnotGroup& group, double eps);

/// M_eps = (1/eps) sum_x nu_x sum_y m_x(y) |u(y) - u(x)| over the chosen region.
double uniform_estimate(const NonlocalProblem& problem, std::span<const double> u_psi, EstimateRegion region);

struct UniformEstimateReport {
  std::vector<double> eps;
  std::vector<double> m;
  double sup = 0.0;
  double slope = 0.0;  ///< least-squares slope of log M against log(1/eps) (0 if M vanishes)
  bool bounded = false;
};

UniformEstimateReport uniform_estimate_check(std::span<const SweepEntry> entries, double max_slope = 0.1);

// ---------------------------------------------------------------- pairing test

struct StructurePairingOptions {
  int x_nodes = 8;  ///< Gauss-Legendre nodes per axis over the support of phi
  int z_nodes = 6;  ///< Gauss-Legendre nodes per axis over the unit cube
  std::vector<double> support_lower, support_upper;  ///< box carrying phi; default [0.2, 0.8]^n
};

struct StructurePairingReport {
  std::vector<double> eps;
  std::vector<double> errors;
  double reference = 0.0;  ///< int int psi_z(z) <z, X f(x)> phi(x)
  double fitted_order = 0.0;
  bool exact = false;  ///< all errors at round-off level
};

/**
 * Compares int int chi(z) (f(x delta_eps z) - f(x)) / eps phi(x) psi_z(z)
 * with its limit int int chi(z) psi_z(z) <z, X f(x)> phi(x), phi a tensor
 * bump (1 - t^2)^3 on the support box and psi_z(z) = 1 + z_n.
 */
StructurePairingReport structure_pairing_check(const CarnotGroup& group, const Polynomial& f,
                                               std::span<const double> eps_list,
                                               const StructurePairingOptions& options = {});

// ---------------------------------------------------------------- zeta and local checks

struct ZetaField {
  int m = 0;
  std::vector<double> values;  ///< interior-major, m entries per interior point
  std::vector<char> bulk;      ///< ball of the point lies in the active set
  double sup_norm = 0.0;       ///< max over points of the Euclidean norm

  std::span<const double> at(std::size_t slot) const {
    return {values.data() + slot * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
  }
};

/// zeta_i(x) = (1/C_G) sum_y g(x, y) z_i theta h^n / eps^Q, z = delta_{1/eps}(x^{-1} y).
ZetaField extract_zeta(const NonlocalProblem& problem, const DualField& g);

enum class HorizontalNorm { Euclidean, Sup };

struct LocalCertOptions {
  double tol = 1e-6;
  HorizontalNorm norm = HorizontalNorm::Euclidean;
};

struct LocalCertReport {
  double divergence_residual = 0.0;  ///< max over test fields v of |sum_x zeta . Xv nu|
  std::size_t test_fields = 0;
  double pairing_defect = 0.0;  ///< sum_x (|Xu_h| - zeta . Xu_h) nu
  double zeta_sup = 0.0;
  bool zeta_feasible = false;  ///< zeta_sup <= 1 + tol
};

LocalCertReport check_local_certificate(const DiscreteDomain& domain, std::span<const double> u_interior,
                                        const ZetaField& zeta, const LocalCertOptions& options = {});

/// Horizontal finite-difference gradient (u(x o delta_h(e_j)) - u(x)) / h, one-sided near the boundary.
/// Returns nullopt where neither direction stays within the interior.
std::optional<HorizontalVector> discrete_horizontal_gradient(const DiscreteDomain& domain,
                                                             std::span<const double> u_interior, std::size_t slot);

/// sum_x |Xu_h(x)| nu over interior points with a defined discrete gradient.
double local_tv_estimate(const CarnotGroup& group, const DiscreteDomain& domain, std::span<const double> u_interior,
                         HorizontalNorm norm = HorizontalNorm::Euclidean);

/// sum_x |u(x) - u_ref(x)| nu over interior points. Throws invalid_argument on mismatched lengths.
double compare_to_reference(std::span<const double> u, std::span<const double> u_ref, const DiscreteDomain& domain);

}  // namespace lgp
