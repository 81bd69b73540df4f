#include <cmath>
#include <stdexcept>

#include "edge_system.hpp"
#include "lgp/parallel.hpp"
#include "lgp/solver.hpp"

namespace lgp {

NonlocalProblem::NonlocalProblem(const DiscreteDomain& domain, const WalkKernel& kernel, const BoundaryDatum& psi)
    : domain_(&domain), kernel_(&kernel), psi_(domain.size(), 0.0) {
  if (kernel.num_points() != domain.size()) throw std::invalid_argument("kernel was built for a different domain");
  for (auto i : domain.halo()) {
    const double v = psi(domain.coords(i));
    if (!std::isfinite(v)) throw std::invalid_argument("boundary datum is not finite at a halo point");
    psi_[i] = v;
  }
  bool first = true;
  for (auto i : domain.boundary()) {
    lo_ = first ? psi_[i] : std::min(lo_, psi_[i]);
    hi_ = first ? psi_[i] : std::max(hi_, psi_[i]);
    first = false;
  }
}

bool NonlocalProblem::binary_datum() const {
  for (auto i : domain_->boundary())
    if (psi_[i] != 0.0 && psi_[i] != 1.0) return false;
  return true;
}

std::vector<double> NonlocalProblem::extend(std::span<const double> u_interior) const {
  if (u_interior.size() != domain_->interior().size()) throw std::invalid_argument("u length differs from interior size");
  std::vector<double> out(psi_);
  for (std::size_t s = 0; s < u_interior.size(); ++s) out[domain_->interior()[s]] = u_interior[s];
  return out;
}

double problem_energy(const NonlocalProblem& problem, std::span<const double> u_interior) {
  return nonlocal_tv(problem.domain(), problem.kernel(), problem.extend(u_interior));
}

CertificateReport check_certificate(const NonlocalProblem& problem, std::span<const double> u_psi, const DualField& g,
                                    double tol) {
  const auto& dom = problem.domain();
  const auto& ker = problem.kernel();
  const auto edges = ker.edges();
  if (u_psi.size() != dom.size() || g.g.size() != edges.size())
    throw std::invalid_argument("certificate shapes do not match the problem");

  CertificateReport rep;
  const double tie = problem.tie_tolerance();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    rep.bound_excess = std::max(rep.bound_excess, std::abs(g.g[e]) - 1.0);
    const double d = u_psi[edges[e].b] - u_psi[edges[e].a];
    if (std::abs(d) > tie) rep.sign_defect = std::max(rep.sign_defect, std::abs(g.g[e] * d - std::abs(d)));
  }
  const auto interior = dom.interior();
  rep.row_residual = parallel_max(interior.size(), 512, [&](std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t s = lo; s < hi; ++s) {
      const auto i = interior[s];
      CompensatedSum acc;
      for (const auto& nb : ker.row(i)) {
        const auto& e = edges[nb.edge];
        acc.add(e.weight * (e.a == i ? g.g[nb.edge] : -g.g[nb.edge]));
      }
      m = std::max(m, std::abs(acc.value()));
    }
    return m;
  });
  rep.passed = rep.antisymmetry <= tol && rep.bound_excess <= tol && rep.row_residual <= tol && rep.sign_defect <= tol;
  return rep;
}

}  // namespace lgp
