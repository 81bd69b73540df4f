#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "edge_system.hpp"
#include "lgp/parallel.hpp"
#include "lgp/solver.hpp"

namespace lgp {

namespace {

constexpr std::size_t kChunk = 4096;

struct Evaluation {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double relative_gap = 0.0;
  double row_residual = 0.0;
  double sign_residual = 0.0;
  bool converged = false;
};

double sign_or_zero(double v, double tie) { return std::abs(v) <= tie ? 0.0 : (v > 0 ? 1.0 : -1.0); }

class PrimalDual {
 public:
  PrimalDual(const NonlocalProblem& problem, const SolveParams& params)
      : prob_(problem), params_(params), sys_(problem), lo_(problem.psi_min()), hi_(problem.psi_max()) {
    r_.assign(sys_.slots, 0.0);
    delta_.assign(sys_.c.size(), 0.0);
    cg_.assign(sys_.c.size(), 0.0);
    double total_c = 0.0;
    for (double ci : sys_.c) total_c += ci;
    energy_floor_ = 1e-12 * total_c * std::max({hi_ - lo_, problem.psi_sup_norm(), 1.0});
  }

  double operator_norm() {
    const std::size_t n = sys_.slots;
    std::vector<double> v(n), w(n);
    std::mt19937_64 rng(params_.seed);
    std::normal_distribution<double> dist;
    for (auto& x : v) x = dist(rng);
    double est = 0.0;
    for (int it = 0; it < std::max(1, params_.power_iterations); ++it) {
      double nv = 0.0;
      for (double x : v) nv += x * x;
      nv = std::sqrt(nv);
      if (nv == 0.0) return 0.0;
      for (auto& x : v) x /= nv;
      sys_.apply(v, delta_, false);
      for (auto e : sys_.coupled) delta_[e] *= sys_.c[e] * sys_.c[e];
      sys_.apply_transpose(delta_, w);
      double nw = 0.0;
      for (double x : w) nw += x * x;
      est = std::sqrt(std::sqrt(nw));
      v.swap(w);
    }
    return est;
  }

  Evaluation evaluate(std::span<const double> u, std::span<const double> g) {
    Evaluation ev;
    std::vector<double> uc(u.begin(), u.end());
    for (auto& x : uc) x = std::clamp(x, lo_, hi_);
    sys_.apply(uc, delta_, true);
    for (auto e : sys_.coupled) cg_[e] = sys_.c[e] * g[e];
    sys_.apply_transpose(cg_, r_);
    const double tie = prob_.tie_tolerance();
    CompensatedSum primal, dual;
    double sign_res = 0.0;
    for (auto e : sys_.coupled) {
      const double d = delta_[e];
      primal.add(sys_.c[e] * std::abs(d));
      dual.add(cg_[e] * sys_.b[e]);
      if (std::abs(d) > tie) sign_res = std::max(sign_res, std::abs(g[e] * d - std::abs(d)));
    }
    double row = 0.0;
    const double nu = prob_.domain().cell_measure();
    for (double rs : r_) {
      dual.add(std::min(lo_ * rs, hi_ * rs));
      row = std::max(row, std::abs(rs) / nu);
    }
    ev.primal = primal.value() + sys_.constant_energy;
    ev.dual = dual.value() + sys_.constant_energy;
    ev.gap = ev.primal - ev.dual;
    ev.relative_gap = ev.gap / std::max({std::abs(ev.primal), std::abs(ev.dual), energy_floor_});
    ev.row_residual = row;
    ev.sign_residual = sign_res;
    ev.converged = ev.relative_gap <= params_.tol && row <= params_.tol && sign_res <= params_.tol;
    return ev;
  }

  NonlocalSolution run() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = sys_.slots;
    const std::size_t ne = sys_.c.size();
    const auto& coupled = sys_.coupled;

    std::vector<double> u(n, 0.5 * (lo_ + hi_));
    if (params_.warm_start) {
      sys_.solve_weighted_laplacian(sys_.c, u, 1e-12, std::max<std::size_t>(2000, 4 * n));
      for (auto& x : u) x = std::clamp(x, lo_, hi_);
    }
    std::vector<double> g(ne, 0.0);
    const double tie = prob_.tie_tolerance();
    for (std::size_t e = 0; e < ne; ++e)
      if (sys_.sa[e] < 0 && sys_.sb[e] < 0) g[e] = sign_or_zero(sys_.b[e], tie);

    SolveReport rep;
    const double knorm = operator_norm();
    rep.operator_norm = knorm;
    const double range = std::max(hi_ - lo_, 1e-12);
    double omega = std::sqrt(static_cast<double>(std::max<std::size_t>(coupled.size(), 1)) /
                             static_cast<double>(std::max<std::size_t>(n, 1))) /
                   range;
    const double eta = knorm > 0 ? 0.95 / knorm : 1.0;

    std::vector<double> u_new(n), u_bar(n), u_sum(n, 0.0), g_sum(ne, 0.0);
    std::vector<double> u_avg(n), g_avg(ne);
    std::vector<double> u_anchor = u, g_anchor = g;
    std::size_t since_restart = 0;
    Evaluation best = evaluate(u, g);
    double gap_at_restart = best.gap;
    double prev_candidate = best.gap;
    bool done = false;
    std::size_t it = 0;

    auto adopt = [&](const std::vector<double>& uu, const std::vector<double>& gg, const Evaluation& ev) {
      u = uu;
      for (auto e : coupled) g[e] = gg[e];
      best = ev;
    };

    while (!done && it < params_.max_iter) {
      const double tau = eta / omega;
      const double sigma = eta * omega;
      for (auto e : coupled) cg_[e] = sys_.c[e] * g[e];
      sys_.apply_transpose(cg_, r_);
      for (std::size_t s = 0; s < n; ++s) {
        u_new[s] = u[s] - tau * r_[s];
        u_bar[s] = 2.0 * u_new[s] - u[s];
      }
      sys_.apply(u_bar, delta_, true);
      parallel_for(coupled.size(), kChunk, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
          const auto e = coupled[k];
          g[e] = std::clamp(g[e] + sigma * sys_.c[e] * delta_[e], -1.0, 1.0);
        }
      });
      u.swap(u_new);
      ++it;
      ++since_restart;
      for (std::size_t s = 0; s < n; ++s) u_sum[s] += u[s];
      for (auto e : coupled) g_sum[e] += g[e];

      const bool last = it == params_.max_iter;
      if (it % std::max<std::size_t>(params_.check_every, 1) != 0 && !last) continue;

      const double inv = 1.0 / static_cast<double>(since_restart);
      for (std::size_t s = 0; s < n; ++s) u_avg[s] = u_sum[s] * inv;
      for (auto e : coupled) g_avg[e] = g_sum[e] * inv;
      const Evaluation cur = evaluate(u, g);
      const Evaluation avg = evaluate(u_avg, g_avg);
      if (cur.converged || (avg.converged && !cur.converged)) {
        if (!cur.converged) adopt(u_avg, g_avg, avg); else best = cur;
        done = true;
        break;
      }
      const bool use_avg = avg.gap < cur.gap;
      const Evaluation& cand = use_avg ? avg : cur;
      best = cur;
      if (params_.step_rule != SolveParams::StepRule::AdaptiveRestart) {
        prev_candidate = cand.gap;
        continue;
      }
      const bool restart = cand.gap <= 0.2 * gap_at_restart ||
                           (cand.gap <= 0.8 * gap_at_restart && cand.gap > prev_candidate) ||
                           static_cast<double>(since_restart) >= 0.36 * static_cast<double>(it);
      prev_candidate = cand.gap;
      if (!restart) continue;
      if (use_avg) adopt(u_avg, g_avg, avg);
      double du = 0.0, dg = 0.0;
      for (std::size_t s = 0; s < n; ++s) du += (u[s] - u_anchor[s]) * (u[s] - u_anchor[s]);
      for (auto e : coupled) dg += (g[e] - g_anchor[e]) * (g[e] - g_anchor[e]);
      if (du > 1e-20 && dg > 1e-20) omega = std::exp(0.5 * std::log(std::sqrt(dg / du)) + 0.5 * std::log(omega));
      u_anchor = u;
      g_anchor = g;
      std::fill(u_sum.begin(), u_sum.end(), 0.0);
      for (auto e : coupled) g_sum[e] = 0.0;
      since_restart = 0;
      gap_at_restart = cand.gap;
      prev_candidate = cand.gap;
      ++rep.restarts;
    }

    NonlocalSolution sol;
    sol.u = u;
    for (auto& x : sol.u) x = std::clamp(x, lo_, hi_);
    sol.u_psi = prob_.extend(sol.u);
    sol.dual.g = g;
    rep.iterations = it;
    rep.primal_energy = best.primal;
    rep.dual_energy = best.dual;
    rep.gap = best.gap;
    rep.relative_gap = best.relative_gap;
    rep.row_residual = best.row_residual;
    rep.sign_residual = best.sign_residual;
    rep.converged = best.converged;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sol.report = rep;
    return sol;
  }

 private:
  const NonlocalProblem& prob_;
  SolveParams params_;
  detail::EdgeSystem sys_;
  double lo_, hi_;
  double energy_floor_ = 0.0;
  std::vector<double> r_, delta_, cg_;
};

}  // namespace

NonlocalSolution solve_primal_dual(const NonlocalProblem& problem, const SolveParams& params) {
  if (params.tol <= 0.0) throw std::invalid_argument("solver tolerance must be positive");
  PrimalDual pd(problem, params);
  return pd.run();
}

}  // namespace lgp
