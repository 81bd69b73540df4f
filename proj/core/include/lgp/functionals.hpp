#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lgp/kernel.hpp"

namespace lgp {

/// Dirichlet datum psi, evaluated pointwise at halo cell centers.
class BoundaryDatum {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  BoundaryDatum(Evaluator f, std::string description);
  static BoundaryDatum constant(double c);

  double operator()(std::span<const double> x) const { return f_(x); }
  const std::string& description() const { return description_; }

 private:
  Evaluator f_;
  std::string description_;
};

/// u on interior points (ordered as domain.interior()), psi on halo points.
/// Throws invalid_argument on a size mismatch, non-finite u or non-finite psi at a halo point.
std::vector<double> extend(const DiscreteDomain& domain, std::span<const double> u_interior, const BoundaryDatum& psi);

/// Restriction of a full-domain vector to interior points.
std::vector<double> restrict_to_interior(const DiscreteDomain& domain, std::span<const double> values);

enum class Normalization {
  Discrete,  ///< kernel weights as built (rows sum to 1)
  Analytic,  ///< weights h^n theta / (2^n eps^Q)
};

/// J(u) = 1/2 sum_x nu_x sum_y m_x(y) |u(y) - u(x)| over all kernel rows.
double nonlocal_tv(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi,
                   Normalization norm = Normalization::Discrete);

/// 1/2 sum_{x in Omega} nu_x sum_y m_x(y) |u(y) - u(x)|: the rows of J owned by interior points.
double interior_tv(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi);

/// Discrete int_D int_{U(0,1)} chi_D(x delta_eps z) |(u(x delta_eps z) - u(x)) / eps|^q dz dx, D the active set.
double rescaled_gradient_norm(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi,
                              double q);

/// (sum_{x in Omega} nu sum_y m_x(y) |u(y) - u(x)|^q + sum_{boundary} |psi|^q nu) / sum_{x in Omega} |u|^q nu.
/// Throws std::domain_error when the denominator vanishes.
double poincare_ratio(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi, double q);

}  // namespace lgp
