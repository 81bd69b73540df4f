#include "lgp/limit_lab.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lgp/parallel.hpp"

namespace lgp {

namespace {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > 0 && y[k] > 0) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  }
  if (lx.size() < 2) return 0.0;
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double bump(double t) {
  const double s = 1.0 - t * t;
  return s > 0 ? s * s * s : 0.0;
}

}  // namespace

double rescale_factor(const CarnotGroup& group, double eps) {
  return std::pow(2.0, group.dimension() + 1) / (group.c_constant() * eps);
}

double uniform_estimate(const NonlocalProblem& problem, std::span<const double> u_psi, EstimateRegion region) {
  const auto& dom = problem.domain();
  const auto& ker = problem.kernel();
  const double eps = ker.eps();
  if (region == EstimateRegion::OmegaM) return 2.0 * nonlocal_tv(dom, ker, u_psi) / eps;

  // Every stored point owns a row of the walk restricted to stored points.
  const double scale = dom.cell_measure() * dom.cell_measure() / ker.reference_mass();
  const double total = parallel_sum(dom.size(), 256, [&](std::size_t lo, std::size_t hi) {
    CompensatedSum acc;
    for (std::size_t i = lo; i < hi; ++i) {
      const double ui = u_psi[i];
      for_each_ball_cell(dom.group(), dom.spacing(), dom.index(i), eps,
                         [&](const LatticeIndex& y, const double*, double theta) {
                           if (const auto j = dom.find(y)) acc.add(theta * std::abs(u_psi[*j] - ui));
                           return true;
                         });
    }
    return acc.value();
  });
  return scale * total / eps;
}

SweepResult sweep_epsilon(const SweepPlan& plan, const SweepObserver& observer) {
  if (plan.eps.empty()) throw std::invalid_argument("sweep needs at least one eps");
  if (!(plan.rho >= 2.0)) throw std::invalid_argument("rho = eps/h must be at least 2");
  for (std::size_t k = 0; k < plan.eps.size(); ++k) {
    if (!(plan.eps[k] > 0.0)) throw std::invalid_argument("eps must be positive");
    if (k > 0 && !(plan.eps[k] < plan.eps[k - 1])) throw std::invalid_argument("eps list must be strictly decreasing");
    if (!plan.halo_tracks_eps && plan.eps[k] > plan.domain.halo_width() * (1.0 + kTieTolerance))
      throw std::invalid_argument("eps exceeds the halo width");
  }

  SweepResult result;
  result.all_converged = true;
  for (double eps : plan.eps) {
    const double h = eps / plan.rho;
    const DomainSpec spec = plan.halo_tracks_eps ? plan.domain.with_halo_width(eps) : plan.domain;
    const DiscreteDomain dom = build_lattice(plan.group, spec, eps, h);
    const WalkKernel ker = build_kernel(plan.group, dom, eps);
    const NonlocalProblem prob(dom, ker, plan.psi);
    const NonlocalSolution sol = solve_primal_dual(prob, plan.solver);

    SweepEntry e;
    e.eps = eps;
    e.h = h;
    e.points = dom.size();
    e.interior = dom.interior().size();
    e.active = dom.interior().size() + dom.boundary().size();
    e.edges = ker.edges().size();
    e.energy = nonlocal_tv(dom, ker, sol.u_psi);
    e.rescaled_energy = rescale_factor(plan.group, eps) * e.energy;
    e.interior_energy = interior_tv(dom, ker, sol.u_psi);
    e.rescaled_interior_energy = rescale_factor(plan.group, eps) * e.interior_energy;
    e.mass_ratio_min = ker.min_mass_ratio();
    e.mass_ratio_max = ker.max_mass_ratio();
    e.uniform_estimate = uniform_estimate(prob, sol.u_psi, plan.region);
    e.solve = sol.report;
    e.certificate = check_certificate(prob, sol.u_psi, sol.dual, plan.solver.tol);
    if (plan.reference) {
      std::vector<double> ref;
      ref.reserve(dom.interior().size());
      for (auto i : dom.interior()) ref.push_back(plan.reference(dom.coords(i)));
      e.l1_distance = compare_to_reference(sol.u, ref, dom);
    } else {
      e.l1_distance = std::numeric_limits<double>::quiet_NaN();
    }
    result.all_converged = result.all_converged && sol.report.converged;
    if (observer) observer(e, prob, sol);
    result.entries.push_back(e);
  }
  return result;
}

UniformEstimateReport uniform_estimate_check(std::span<const SweepEntry> entries, double max_slope) {
  UniformEstimateReport rep;
  for (const auto& e : entries) {
    rep.eps.push_back(e.eps);
    rep.m.push_back(e.uniform_estimate);
    rep.sup = std::max(rep.sup, e.uniform_estimate);
  }
  // Slope against log(1/eps): positive means growth as eps -> 0.
  rep.slope = rep.sup > 0 ? -loglog_slope(rep.eps, rep.m) : 0.0;
  rep.bounded = rep.slope <= max_slope;
  return rep;
}

StructurePairingReport structure_pairing_check(const CarnotGroup& group, const Polynomial& f,
                                               std::span<const double> eps_list,
                                               const StructurePairingOptions& options) {
  const int n = group.dimension();
  if (f.dimension() != n) throw std::invalid_argument("polynomial dimension differs from group dimension");
  std::vector<double> lower = options.support_lower, upper = options.support_upper;
  if (lower.empty()) lower.assign(static_cast<std::size_t>(n), 0.2);
  if (upper.empty()) upper.assign(static_cast<std::size_t>(n), 0.8);
  if (lower.size() != static_cast<std::size_t>(n) || upper.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("support box dimension differs from group dimension");

  std::vector<double> xn, xw, zn, zw;
  gauss_legendre(options.x_nodes, xn, xw);
  gauss_legendre(options.z_nodes, zn, zw);
  const auto nx = static_cast<std::size_t>(options.x_nodes);
  const auto nz = static_cast<std::size_t>(options.z_nodes);

  struct Node {
    std::array<double, kMaxDim> p{};
    double w = 0.0;
  };
  std::vector<Node> xs, zs;
  {
    std::size_t total = 1;
    for (int k = 0; k < n; ++k) total *= nx;
    for (std::size_t flat = 0; flat < total; ++flat) {
      Node node;
      node.w = 1.0;
      std::size_t rem = flat;
      for (int k = n - 1; k >= 0; --k) {
        const auto kk = static_cast<std::size_t>(k);
        const std::size_t j = rem % nx;
        rem /= nx;
        const double half = 0.5 * (upper[kk] - lower[kk]);
        node.p[kk] = lower[kk] + half * (xn[j] + 1.0);
        node.w *= half * xw[j] * bump(xn[j]);
      }
      xs.push_back(node);
    }
    total = 1;
    for (int k = 0; k < n; ++k) total *= nz;
    for (std::size_t flat = 0; flat < total; ++flat) {
      Node node;
      node.w = 1.0;
      std::size_t rem = flat;
      for (int k = n - 1; k >= 0; --k) {
        const std::size_t j = rem % nz;
        rem /= nz;
        node.p[static_cast<std::size_t>(k)] = zn[j];
        node.w *= zw[j];
      }
      node.w *= 1.0 + node.p[static_cast<std::size_t>(n - 1)];
      zs.push_back(node);
    }
  }

  StructurePairingReport rep;
  {
    CompensatedSum ref;
    for (const auto& x : xs) {
      const GroupPoint gx(std::span<const double>(x.p.data(), static_cast<std::size_t>(n)));
      const auto grad = f.gradient(gx.values());
      const HorizontalVector xf = group.horizontal_gradient(grad, gx);
      for (const auto& z : zs) {
        double pair = 0.0;
        for (int j = 0; j < group.horizontal_dimension(); ++j) pair += z.p[static_cast<std::size_t>(j)] * xf[j];
        ref.add(x.w * z.w * pair);
      }
    }
    rep.reference = ref.value();
  }

  bool exact = true;
  for (double eps : eps_list) {
    CompensatedSum sum;
    double magnitude = 0.0;
    std::array<double, kMaxDim> dz{}, moved{};
    for (const auto& x : xs) {
      const double fx = f.value({x.p.data(), static_cast<std::size_t>(n)});
      for (const auto& z : zs) {
        for (int k = 0; k < n; ++k)
          dz[static_cast<std::size_t>(k)] = std::pow(eps, group.degree(k)) * z.p[static_cast<std::size_t>(k)];
        group.multiply_raw(x.p.data(), dz.data(), moved.data());
        const double fm = f.value({moved.data(), static_cast<std::size_t>(n)});
        sum.add(x.w * z.w * (fm - fx) / eps);
        magnitude += std::abs(x.w * z.w) * (std::abs(fm) + std::abs(fx));
      }
    }
    const double err = std::abs(sum.value() - rep.reference);
    rep.eps.push_back(eps);
    rep.errors.push_back(err);
    if (err > 64.0 * DBL_EPSILON * std::max(1.0, magnitude) / eps) exact = false;
  }
  rep.exact = exact;
  rep.fitted_order = exact ? 0.0 : loglog_slope(rep.eps, rep.errors);
  return rep;
}

double compare_to_reference(std::span<const double> u, std::span<const double> u_ref, const DiscreteDomain& domain) {
  if (u.size() != u_ref.size() || u.size() != domain.interior().size())
    throw std::invalid_argument("solutions live on different domains");
  CompensatedSum s;
  for (std::size_t k = 0; k < u.size(); ++k) s.add(std::abs(u[k] - u_ref[k]));
  return s.value() * domain.cell_measure();
}

}  // namespace lgp
