#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edge_system.hpp"
#include "lgp/parallel.hpp"
#include "lgp/solver.hpp"

namespace lgp {

namespace {

struct SmoothedPower {
  double p, delta;
  double weight(double d) const { return std::pow(d * d + delta * delta, 0.5 * (p - 2.0)); }
  double energy(double d) const { return std::pow(d * d + delta * delta, 0.5 * p) / p; }
};

}  // namespace

PLaplaceResult solve_plaplace(const NonlocalProblem& problem, const PLaplaceParams& params,
                              std::span<const double> initial) {
  if (!(params.p > 1.0 && params.p <= 3.0)) throw std::invalid_argument("p must lie in (1, 3]");
  if (!(params.delta > 0.0)) throw std::invalid_argument("smoothing delta must be positive");
  const detail::EdgeSystem sys(problem);
  const std::size_t n = sys.slots;
  const std::size_t ne = sys.c.size();
  const double nu = problem.domain().cell_measure();
  const SmoothedPower phi{params.p, params.delta};

  PLaplaceResult res;
  res.u.assign(n, 0.5 * (problem.psi_min() + problem.psi_max()));
  if (!initial.empty()) {
    if (initial.size() != n) throw std::invalid_argument("initial guess length differs from interior size");
    res.u.assign(initial.begin(), initial.end());
  } else if (params.p != 2.0) {
    sys.solve_weighted_laplacian(sys.c, res.u, params.cg_tol, params.cg_max_iter);
  }

  std::vector<double> delta(ne, 0.0), a(ne, 0.0), flux(ne, 0.0), row(n, 0.0), trial(n);
  auto residual_of = [&](std::span<const double> u) {
    sys.apply(u, delta, true);
    for (auto e : sys.coupled) flux[e] = sys.c[e] * phi.weight(delta[e]) * delta[e];
    sys.apply_transpose(flux, row);
    double m = 0.0;
    for (double v : row) m = std::max(m, std::abs(v) / nu);
    return m;
  };
  auto energy_of = [&](std::span<const double> u) {
    sys.apply(u, delta, true);
    CompensatedSum s;
    for (auto e : sys.coupled) s.add(sys.c[e] * phi.energy(delta[e]));
    return s.value();
  };

  res.residual = residual_of(res.u);
  for (std::size_t it = 0; it < params.max_iter && res.residual > params.tol; ++it) {
    sys.apply(res.u, delta, true);
    for (auto e : sys.coupled) a[e] = sys.c[e] * phi.weight(delta[e]);
    trial = res.u;
    sys.solve_weighted_laplacian(a, trial, params.cg_tol, params.cg_max_iter);
    if (params.p > 2.0) {
      // The reweighted step is not a majorizer for p > 2; backtrack on the smoothed energy.
      const double e0 = energy_of(res.u);
      double t = 1.0;
      std::vector<double> step(trial);
      for (int k = 0; k < 40; ++k) {
        for (std::size_t s = 0; s < n; ++s) step[s] = res.u[s] + t * (trial[s] - res.u[s]);
        if (energy_of(step) <= e0) break;
        t *= 0.5;
      }
      trial.swap(step);
    }
    res.u.swap(trial);
    res.iterations = it + 1;
    const double r = residual_of(res.u);
    if (!std::isfinite(r)) break;
    res.residual = r;
  }
  res.converged = std::isfinite(res.residual) && res.residual <= params.tol;
  return res;
}

}  // namespace lgp
