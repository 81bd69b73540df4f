#include "lgp/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "lgp/parallel.hpp"

namespace lgp {

namespace {
constexpr std::size_t kEdgeChunk = 8192;

void check_full(const DiscreteDomain& domain, std::span<const double> u_psi) {
  if (u_psi.size() != domain.size()) throw std::invalid_argument("vector length differs from domain size");
}
}  // namespace

BoundaryDatum::BoundaryDatum(Evaluator f, std::string description) : f_(std::move(f)), description_(std::move(description)) {
  if (!f_) throw std::invalid_argument("boundary datum needs an evaluator");
}

BoundaryDatum BoundaryDatum::constant(double c) {
  return BoundaryDatum([c](std::span<const double>) { return c; }, "constant");
}

std::vector<double> extend(const DiscreteDomain& domain, std::span<const double> u_interior, const BoundaryDatum& psi) {
  if (u_interior.size() != domain.interior().size()) throw std::invalid_argument("u length differs from interior size");
  std::vector<double> out(domain.size(), 0.0);
  for (std::size_t s = 0; s < u_interior.size(); ++s) {
    if (!std::isfinite(u_interior[s])) throw std::invalid_argument("non-finite interior value");
    out[domain.interior()[s]] = u_interior[s];
  }
  for (auto i : domain.halo()) {
    const double v = psi(domain.coords(i));
    if (!std::isfinite(v)) throw std::invalid_argument("boundary datum is not finite at a halo point");
    out[i] = v;
  }
  return out;
}

std::vector<double> restrict_to_interior(const DiscreteDomain& domain, std::span<const double> values) {
  check_full(domain, values);
  std::vector<double> out;
  out.reserve(domain.interior().size());
  for (auto i : domain.interior()) out.push_back(values[i]);
  return out;
}

double nonlocal_tv(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi,
                   Normalization norm) {
  check_full(domain, u_psi);
  const auto edges = kernel.edges();
  const double scale = domain.cell_measure() *
                       (norm == Normalization::Analytic ? kernel.reference_mass() / kernel.analytic_mass() : 1.0);
  const double s = parallel_sum(edges.size(), kEdgeChunk, [&](std::size_t b, std::size_t e) {
    CompensatedSum acc;
    for (std::size_t k = b; k < e; ++k) acc.add(edges[k].weight * std::abs(u_psi[edges[k].b] - u_psi[edges[k].a]));
    return acc.value();
  });
  return scale * s;
}

double interior_tv(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi) {
  check_full(domain, u_psi);
  const auto edges = kernel.edges();
  const double s = parallel_sum(edges.size(), kEdgeChunk, [&](std::size_t b, std::size_t e) {
    CompensatedSum acc;
    for (std::size_t k = b; k < e; ++k) {
      const int owners = static_cast<int>(domain.is_interior(edges[k].a)) + static_cast<int>(domain.is_interior(edges[k].b));
      if (owners) acc.add(0.5 * owners * edges[k].weight * std::abs(u_psi[edges[k].b] - u_psi[edges[k].a]));
    }
    return acc.value();
  });
  return domain.cell_measure() * s;
}

double rescaled_gradient_norm(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi,
                              double q) {
  check_full(domain, u_psi);
  if (!(q >= 1.0)) throw std::invalid_argument("q must be at least 1");
  const double eps = kernel.eps();
  const double hn = domain.cell_measure();
  const double dz = hn / std::pow(eps, domain.group().homogeneous_dimension());
  const auto edges = kernel.edges();
  const double s = parallel_sum(edges.size(), kEdgeChunk, [&](std::size_t b, std::size_t e) {
    CompensatedSum acc;
    for (std::size_t k = b; k < e; ++k) {
      const double d = std::abs(u_psi[edges[k].b] - u_psi[edges[k].a]) / eps;
      acc.add(kernel.theta(edges[k]) * (q == 1.0 ? d : std::pow(d, q)));
    }
    return acc.value();
  });
  // Each unordered edge stands for the two ordered pairs (x, y) and (y, x).
  return 2.0 * hn * dz * s;
}

double poincare_ratio(const DiscreteDomain& domain, const WalkKernel& kernel, std::span<const double> u_psi, double q) {
  check_full(domain, u_psi);
  if (!(q >= 1.0)) throw std::invalid_argument("q must be at least 1");
  const double nu = domain.cell_measure();
  const auto edges = kernel.edges();
  CompensatedSum jump, boundary, denom;
  for (const auto& e : edges) {
    const double d = std::pow(std::abs(u_psi[e.b] - u_psi[e.a]), q);
    const int owners = static_cast<int>(domain.is_interior(e.a)) + static_cast<int>(domain.is_interior(e.b));
    jump.add(owners * e.weight * d);
  }
  for (auto i : domain.boundary()) boundary.add(std::pow(std::abs(u_psi[i]), q));
  for (auto i : domain.interior()) denom.add(std::pow(std::abs(u_psi[i]), q));
  if (!(denom.value() > 0.0)) throw std::domain_error("Poincare ratio undefined: u vanishes on the interior");
  return (nu * jump.value() + nu * boundary.value()) / (nu * denom.value());
}

}  // namespace lgp
