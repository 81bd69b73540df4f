#include "lgp_runner/commands.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace lgp::runner {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kNote =
    "balls are box balls U(x, r) = x o delta_r([-1, 1]^n); the box distance replaces the "
    "Carnot-Caratheodory distance, which is equivalent up to constants";

json envelope(std::string_view command, const RunConfig* config) {
  json j = {{"tool", "hypo-lgp"}, {"version", tool_version()}, {"command", command}};
  if (config) {
    j["run_id"] = run_id(*config);
    j["config"] = to_json(*config);
  }
  j["note"] = kNote;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

json to_json(const SolveReport& r) {
  return {{"iterations", r.iterations},     {"restarts", r.restarts},         {"primal_energy", r.primal_energy},
          {"dual_energy", r.dual_energy},   {"gap", r.gap},                   {"relative_gap", r.relative_gap},
          {"row_residual", r.row_residual}, {"sign_residual", r.sign_residual}, {"operator_norm", r.operator_norm},
          {"converged", r.converged}};
}

json to_json(const CertificateReport& r) {
  return {{"antisymmetry", r.antisymmetry},
          {"bound_excess", r.bound_excess},
          {"row_residual", r.row_residual},
          {"sign_defect", r.sign_defect},
          {"passed", r.passed}};
}

json to_json(const LocalCertReport& r) {
  return {{"divergence_residual", r.divergence_residual},
          {"test_fields", r.test_fields},
          {"pairing_defect", r.pairing_defect},
          {"zeta_sup", r.zeta_sup},
          {"zeta_feasible", r.zeta_feasible}};
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Maps library exceptions to exit codes.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    fmt::print(log, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const ConstructionError& e) {
    fmt::print(log, "config error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(log, "config error: {}\n", e.what());
    return kExitUsage;
  }
}

struct Instance {
  CarnotGroup group;
  DiscreteDomain domain;
  WalkKernel kernel;
  BoundaryDatum psi;
  NonlocalProblem problem;

  Instance(const RunConfig& c, double eps)
      : group(make_group(c.group_id)),
        domain(build_lattice(group, c.halo_tracks_eps ? make_domain(c, group).with_halo_width(eps) : make_domain(c, group),
                             eps, eps / c.rho)),
        kernel(build_kernel(group, domain, eps)),
        psi(make_datum(c, group)),
        problem(domain, kernel, psi) {}
  Instance(const Instance&) = delete;
};

SolveParams solver_params(const RunConfig& c) {
  SolveParams p = c.solver;
  p.seed = c.seed;
  return p;
}

std::string eps_dir(std::size_t k) { return fmt::format("eps_{}", k); }

}  // namespace

std::string_view tool_version() { return LGP_TOOL_VERSION; }

// ------------------------------------------------------------------ group-check

int cmd_group_check(const CarnotGroup& group, const GroupCheckOptions& options, const OutDir& out, std::ostream& log) {
  return guarded(log, [&] {
    const GroupCheckReport rep = run_group_checks(group, options);
    fmt::print(log, "group {}  samples {}  seed {}\n", rep.group_id, rep.samples, options.seed);
    json lines = json::array();
    for (const auto& l : rep.lines) {
      fmt::print(log, "  {:<24} max {:<12.3e} tol {:<10.1e} {}\n", l.name, l.max_violation, l.tolerance,
                 l.passed ? "ok" : "FAILED");
      lines.push_back({{"name", l.name}, {"max_violation", l.max_violation}, {"tolerance", l.tolerance},
                       {"passed", l.passed}});
    }
    if (out) {
      ensure_dir(*out);
      json j = envelope("group-check", nullptr);
      j["group"] = rep.group_id;
      j["samples"] = rep.samples;
      j["seed"] = options.seed;
      j["checks"] = lines;
      j["passed"] = rep.passed();
      write_json(*out / "report.json", j);
    }
    return rep.passed() ? kExitOk : kExitNumerical;
  });
}

int cmd_group_check(std::string_view group_id, const GroupCheckOptions& options, const OutDir& out, std::ostream& log) {
  return guarded(log, [&] { return cmd_group_check(make_group(std::string(group_id)), options, out, log); });
}

// ------------------------------------------------------------------ lemma-check

int cmd_lemma_check(const CarnotGroup& group, std::string_view phi_preset, std::span<const double> eps_list,
                    const OutDir& out, std::ostream& log) {
  return guarded(log, [&] {
    if (eps_list.size() < 2) throw UsageError("lemma-check needs at least two eps values");
    const int n = group.dimension();
    const Polynomial phi = Polynomial::preset(phi_preset, n);
    static constexpr double kX[] = {0.7, -0.4, 0.9, 0.3, -0.6, 0.2, 0.5, -0.1};
    static constexpr double kZ[] = {0.6, -0.8, 0.5, 0.9, -0.3, 0.4, -0.7, 0.2};
    const GroupPoint x(std::span<const double>(kX, static_cast<std::size_t>(n)));
    const GroupPoint z(std::span<const double>(kZ, static_cast<std::size_t>(n)));
    const auto grad = phi.gradient(x.values());
    const LemmaReport rep =
        verify_horizontal_lemma(group, [&](const GroupPoint& p) { return phi(p); }, grad, x, z, eps_list);
    const bool pass = rep.exact || rep.fitted_order >= 0.9;
    fmt::print(log, "group {}  phi {}  limit <z, X phi> = {:.12g}\n", group.id(), phi_preset, rep.limit);
    fmt::print(log, "  {:>12} {:>14} {:>10}\n", "eps", "error", "ratio");
    for (std::size_t k = 0; k < rep.eps.size(); ++k) {
      const std::string ratio = k == 0 ? "" : fmt::format("{:.4f}", rep.ratios[k - 1]);
      fmt::print(log, "  {:>12.6g} {:>14.6e} {:>10}\n", rep.eps[k], rep.errors[k], ratio);
    }
    if (rep.exact) fmt::print(log, "  errors at round-off level (horizontally linear)\n");
    else fmt::print(log, "  fitted order {:.4f}\n", rep.fitted_order);
    if (out) {
      ensure_dir(*out);
      json j = envelope("lemma-check", nullptr);
      j["group"] = group.id();
      j["phi"] = phi_preset;
      j["x"] = std::vector<double>(x.values().begin(), x.values().end());
      j["z"] = std::vector<double>(z.values().begin(), z.values().end());
      j["eps"] = rep.eps;
      j["errors"] = rep.errors;
      j["ratios"] = rep.ratios;
      j["limit"] = rep.limit;
      j["exact"] = rep.exact;
      j["fitted_order"] = rep.fitted_order;
      j["passed"] = pass;
      write_json(*out / "report.json", j);
    }
    return pass ? kExitOk : kExitNumerical;
  });
}

int cmd_lemma_check(std::string_view group_id, std::string_view phi_preset, std::span<const double> eps_list,
                    const OutDir& out, std::ostream& log) {
  return guarded(log,
                 [&] { return cmd_lemma_check(make_group(std::string(group_id)), phi_preset, eps_list, out, log); });
}

// ------------------------------------------------------------------ solve

int cmd_solve(const RunConfig& config, const OutDir& out, std::ostream& log) {
  return guarded(log, [&] {
    if (config.eps.empty()) throw UsageError("solve needs sweep.eps");
    const double eps = config.eps.front();
    const Instance inst(config, eps);
    const NonlocalSolution sol = solve_primal_dual(inst.problem, solver_params(config));
    const CertificateReport cert = check_certificate(inst.problem, sol.u_psi, sol.dual, config.certificate_tol);
    const double energy = nonlocal_tv(inst.domain, inst.kernel, sol.u_psi);
    const double rescaled = rescale_factor(inst.group, eps) * energy;
    const bool ok = sol.report.converged && cert.passed;

    fmt::print(log, "solve {}  eps {}  h {}  points {} (interior {})  edges {}\n", inst.group.id(), eps,
               inst.domain.spacing(), inst.domain.size(), inst.domain.interior().size(), inst.kernel.edges().size());
    fmt::print(log, "  energy {:.12g}  rescaled {:.12g}\n", energy, rescaled);
    fmt::print(log, "  iterations {}  relative gap {:.3e}  converged {}\n", sol.report.iterations,
               sol.report.relative_gap, sol.report.converged);
    fmt::print(log, "  certificate: |g|-1 {:.3e}  rows {:.3e}  sign {:.3e}  {}\n", cert.bound_excess,
               cert.row_residual, cert.sign_defect, cert.passed ? "ok" : "FAILED");

    if (out) {
      ensure_dir(*out);
      io::write_solution_csv(*out / "solution.csv", inst.domain, sol.u_psi);
      io::write_dual_csv(*out / "dual.csv", inst.kernel, sol.dual);
      json j = envelope("solve", &config);
      j["eps"] = eps;
      j["h"] = inst.domain.spacing();
      j["points"] = inst.domain.size();
      j["interior"] = inst.domain.interior().size();
      j["edges"] = inst.kernel.edges().size();
      j["energy"] = energy;
      j["rescaled_energy"] = rescaled;
      j["interior_energy"] = interior_tv(inst.domain, inst.kernel, sol.u_psi);
      j["solve"] = to_json(sol.report);
      j["certificate"] = to_json(cert);
      j["passed"] = ok;
      write_json(*out / "report.json", j);
    }
    return ok ? kExitOk : kExitNumerical;
  });
}

// ------------------------------------------------------------------ sweep

int cmd_sweep(const RunConfig& config, const OutDir& out, std::ostream& log) {
  return guarded(log, [&] {
    if (config.eps.size() < 2) throw UsageError("sweep needs at least two eps values");
    const SweepPlan plan = make_plan(config);
    std::vector<json> locals;
    std::size_t index = 0;
    const SweepObserver observer = [&](const SweepEntry& e, const NonlocalProblem& problem,
                                       const NonlocalSolution& sol) {
      const ZetaField zeta = extract_zeta(problem, sol.dual);
      const LocalCertReport lc = check_local_certificate(problem.domain(), sol.u, zeta);
      const double ltv = local_tv_estimate(problem.domain().group(), problem.domain(), sol.u);
      std::size_t bulk = 0;
      for (char b : zeta.bulk) bulk += b ? 1 : 0;
      json lj = to_json(lc);
      lj["local_tv"] = ltv;
      lj["bulk_points"] = bulk;
      locals.push_back(lj);
      fmt::print(log, "  eps {:<10.6g} h {:<10.6g} points {:<8} edges {:<9} J {:<14.8g} 4J/eps {:<12.8g} it {:<6} {}\n",
                 e.eps, e.h, e.points, e.edges, e.energy, e.rescaled_energy, e.solve.iterations,
                 e.solve.converged ? "converged" : "NOT CONVERGED");
      if (out && config.artifacts != "none") {
        const auto dir = *out / eps_dir(index);
        ensure_dir(dir);
        io::write_solution_csv(dir / "solution.csv", problem.domain(), sol.u_psi);
        io::write_zeta_csv(dir / "zeta.csv", problem.domain(), zeta);
        if (config.artifacts == "all") {
          io::write_dual_csv(dir / "dual.csv", problem.kernel(), sol.dual);
          io::write_points_csv(dir / "points.csv", problem.domain());
          io::write_edges_csv(dir / "edges.csv", problem.kernel());
        }
      }
      ++index;
    };
    fmt::print(log, "sweep {}  psi = {}  rho {}\n", plan.group.id(), config.psi, config.rho);
    const SweepResult res = sweep_epsilon(plan, observer);
    const UniformEstimateReport ue = uniform_estimate_check(res.entries);
    bool l1_monotone = true;
    bool have_l1 = !config.reference.empty();
    for (std::size_t k = 1; have_l1 && k < res.entries.size(); ++k)
      if (res.entries[k].l1_distance > res.entries[k - 1].l1_distance + 1e-8) l1_monotone = false;
    fmt::print(log, "  uniform estimate: sup M {:.6g}  slope {:.4f}  {}\n", ue.sup, ue.slope,
               ue.bounded ? "bounded" : "GROWING");
    if (have_l1) fmt::print(log, "  L1 distance to reference {}\n", l1_monotone ? "nonincreasing" : "NOT monotone");

    if (out) {
      ensure_dir(*out);
      io::write_sweep_csv(*out / "sweep.csv", res.entries);
      json entries = json::array();
      for (std::size_t k = 0; k < res.entries.size(); ++k) {
        const auto& e = res.entries[k];
        entries.push_back({{"eps", e.eps},
                           {"h", e.h},
                           {"points", e.points},
                           {"interior", e.interior},
                           {"active", e.active},
                           {"edges", e.edges},
                           {"energy", e.energy},
                           {"rescaled_energy", e.rescaled_energy},
                           {"interior_energy", e.interior_energy},
                           {"rescaled_interior_energy", e.rescaled_interior_energy},
                           {"uniform_estimate", e.uniform_estimate},
                           {"l1_distance", e.l1_distance},
                           {"mass_ratio_min", e.mass_ratio_min},
                           {"mass_ratio_max", e.mass_ratio_max},
                           {"solve", to_json(e.solve)},
                           {"certificate", to_json(e.certificate)},
                           {"local_certificate", locals[k]}});
      }
      json j = envelope("sweep", &config);
      j["entries"] = entries;
      j["uniform_estimate"] = {{"m", ue.m}, {"sup", ue.sup}, {"slope", ue.slope}, {"bounded", ue.bounded}};
      if (have_l1) j["l1_nonincreasing"] = l1_monotone;
      j["all_converged"] = res.all_converged;
      write_json(*out / "report.json", j);
    }
    return res.all_converged ? kExitOk : kExitNumerical;
  });
}

// ------------------------------------------------------------------ oracle-compare

int cmd_oracle_compare(const RunConfig& config, const OutDir& out, std::ostream& log) {
  return guarded(log, [&] {
    if (config.eps.empty()) throw UsageError("oracle-compare needs sweep.eps");
    bool all_ok = true;
    json rows = json::array();
    fmt::print(log, "oracle-compare {}  psi = {}\n", config.group_id, config.psi);
    for (double eps : config.eps) {
      const Instance inst(config, eps);
      const bool binary = inst.problem.binary_datum();
      if (config.mincut == "on" && !binary) throw UsageError("min-cut requested for non-binary psi");
      const bool use_mincut = config.mincut == "on" || (config.mincut == "auto" && binary);

      const NonlocalSolution pd = solve_primal_dual(inst.problem, solver_params(config));
      const double pd_energy = problem_energy(inst.problem, pd.u);
      bool ok = pd.report.converged;
      json row = {{"eps", eps}, {"points", inst.domain.size()}, {"primal_dual", pd_energy},
                  {"converged", pd.report.converged}, {"relative_gap", pd.report.relative_gap}};
      fmt::print(log, "  eps {:<10.6g} points {:<7} primal-dual {:<16.10g} ({})\n", eps, inst.domain.size(),
                 pd_energy, pd.report.converged ? "converged" : "NOT CONVERGED");

      if (use_mincut) {
        const MinCutResult mc = mincut_oracle(inst.problem);
        const double rel = relative_difference(pd_energy, mc.energy);
        const bool agree = rel <= config.mincut_tol;
        ok = ok && agree;
        row["mincut"] = mc.energy;
        row["mincut_relative_difference"] = rel;
        row["mincut_agrees"] = agree;
        fmt::print(log, "    min-cut {:<16.10g} rel diff {:.3e}  {}\n", mc.energy, rel, agree ? "ok" : "FAILED");
      }

      if (!config.p_list.empty()) {
        std::vector<double> energies;
        std::vector<bool> converged;
        std::vector<double> warm;
        for (double p : config.p_list) {
          PLaplaceParams pp;
          pp.p = p;
          pp.max_iter = config.p_max_iter;
          const PLaplaceResult r = solve_plaplace(inst.problem, pp, warm);
          warm = r.u;
          energies.push_back(problem_energy(inst.problem, r.u));
          converged.push_back(r.converged);
        }
        bool monotone = true;
        for (std::size_t k = 1; k < energies.size(); ++k)
          if (energies[k] > energies[k - 1] + 1e-9 * std::max(1.0, std::abs(energies[k - 1]))) monotone = false;
        const double tail = relative_difference(energies.back(), pd_energy);
        const bool close = tail <= config.p_tol || std::abs(energies.back() - pd_energy) <= 1e-12;
        ok = ok && monotone && close;
        json ps = json::array();
        for (std::size_t k = 0; k < energies.size(); ++k) {
          ps.push_back({{"p", config.p_list[k]}, {"energy", energies[k]}, {"converged", static_cast<bool>(converged[k])}});
          fmt::print(log, "    p {:<6.3g} energy {:<16.10g}{}\n", config.p_list[k], energies[k],
                     converged[k] ? "" : "  (iteration cap)");
        }
        fmt::print(log, "    p-sweep {}  tail rel diff {:.3e}  {}\n", monotone ? "nonincreasing" : "NOT monotone", tail,
                   close ? "ok" : "FAILED");
        row["p_sweep"] = ps;
        row["p_nonincreasing"] = monotone;
        row["p_tail_relative_difference"] = tail;
        row["p_tail_agrees"] = close;
      }
      row["passed"] = ok;
      all_ok = all_ok && ok;
      rows.push_back(row);
    }
    if (out) {
      ensure_dir(*out);
      json j = envelope("oracle-compare", &config);
      j["instances"] = rows;
      j["passed"] = all_ok;
      write_json(*out / "report.json", j);
    }
    return all_ok ? kExitOk : kExitNumerical;
  });
}

}  // namespace lgp::runner
