// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.
#include <lgp/lgp.hpp>
#include <lgp_runner/commands.hpp>

#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace lgp;
using runner::RunConfig;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path preset(const std::string& name) { return fs::path(LGP_PRESET_DIR) / (name + ".ini"); }

fs::path scratch_dir() {
  static const fs::path dir = fs::temp_directory_path() / fmt::format("lgp_acceptance_{}", ::getpid());
  return dir;
}

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0.0 : std::abs(a - b) / s;
}

// Shipped sweeps are run once and shared by criteria 7, 8 and 10.
struct SweepRun {
  SweepResult result;
  std::vector<LocalCertReport> local;
  std::vector<double> h;
  bool monotone_1d = true;
  double monotone_violation = 0.0;
};

const std::map<std::string, SweepRun>& shipped_sweeps() {
  static const std::map<std::string, SweepRun> runs = [] {
    std::map<std::string, SweepRun> out;
    for (const char* name : {"line_step", "line_zero", "plane_halfspace", "heisenberg_x1"}) {
      const RunConfig cfg = runner::load_config(preset(name));
      SweepRun run;
      run.result = sweep_epsilon(runner::make_plan(cfg), [&](const SweepEntry& e, const NonlocalProblem& p,
                                                              const NonlocalSolution& s) {
        run.h.push_back(e.h);
        run.local.push_back(check_local_certificate(p.domain(), s.u, extract_zeta(p, s.dual)));
        if (p.domain().dimension() == 1) {
          std::vector<std::pair<double, double>> xu;
          for (std::size_t i = 0; i < p.domain().size(); ++i)
            if (p.kernel().has_row(i)) xu.emplace_back(p.domain().coords(i)[0], s.u_psi[i]);
          std::sort(xu.begin(), xu.end());
          for (std::size_t k = 1; k < xu.size(); ++k)
            run.monotone_violation = std::max(run.monotone_violation, xu[k - 1].second - xu[k].second);
        }
      });
      run.monotone_1d = run.monotone_violation <= 1e-6;
      out.emplace(name, std::move(run));
    }
    return out;
  }();
  return runs;
}

// ------------------------------------------------------------------ 1
Outcome group_algebra() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& g : {CarnotGroup::abelian(3), CarnotGroup::heisenberg1(), CarnotGroup::engel4()}) {
    GroupCheckOptions opt;
    opt.samples = 10000;
    opt.coord_range = 10.0;
    const auto rep = run_group_checks(g, opt);
    double worst = 0.0;
    for (const auto& l : rep.lines) {
      worst = std::max(worst, l.max_violation);
      o.require(l.passed && l.tolerance <= 1e-9, g.id() + " " + l.name);
    }
    o.note(fmt::format("{} worst {:.1e}", g.id(), worst));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, fmt::format("runtime {:.2f} s", secs));
  o.note(fmt::format("{:.2f} s", secs));
  return o;
}

// ------------------------------------------------------------------ 2
Outcome horizontal_lemma() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> eps;
  for (int k = 0; k <= 4; ++k) eps.push_back(0.1 / static_cast<double>(1 << k));
  static constexpr double kX[] = {0.7, -0.4, 0.9, 0.3};
  static constexpr double kZ[] = {0.6, -0.8, 0.5, 0.9};
  double lo = 1e9, hi = 0.0;
  for (const auto& g : {CarnotGroup::abelian(3), CarnotGroup::heisenberg1(), CarnotGroup::engel4()}) {
    const auto n = static_cast<std::size_t>(g.dimension());
    const GroupPoint x(std::span<const double>(kX, n)), z(std::span<const double>(kZ, n));
    for (const char* name : {"quad", "cubic", "mixed"}) {
      const Polynomial phi = Polynomial::preset(name, g.dimension());
      const auto rep = verify_horizontal_lemma(g, [&](const GroupPoint& p) { return phi(p); },
                                               phi.gradient(x.values()), x, z, eps);
      for (double r : rep.ratios) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        o.require(r >= 1.6 && r <= 2.4, fmt::format("{} {} ratio {:.3f}", g.id(), name, r));
      }
    }
    for (int j = 0; j < g.horizontal_dimension(); ++j) {
      const Polynomial phi = Polynomial::coordinate(g.dimension(), j);
      const auto rep = verify_horizontal_lemma(g, [&](const GroupPoint& p) { return phi(p); },
                                               phi.gradient(x.values()), x, z, eps);
      o.require(rep.exact, fmt::format("{} x{} not exact", g.id(), j + 1));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, fmt::format("runtime {:.2f} s", secs));
  o.note(fmt::format("ratios in [{:.4f}, {:.4f}], horizontal coordinates exact, {:.2f} s", lo, hi, secs));
  return o;
}

// ------------------------------------------------------------------ 3
Outcome ball_geometry() {
  Outcome o;
  double worst_mass = 0.0, worst_c = 0.0;
  const std::vector<CarnotGroup> groups = {CarnotGroup::abelian(1), CarnotGroup::abelian(2), CarnotGroup::abelian(3),
                                           CarnotGroup::heisenberg1(), CarnotGroup::engel4()};
  for (const auto& g : groups) {
    for (double eps : {1.0, 0.5}) {
      for (int t = 0; t < 4; ++t) {
        LatticeIndex x{};
        for (int k = 0; k < g.dimension(); ++k) x[static_cast<std::size_t>(k)] = (t * 7 + k * 3) % 11 - 5;
        const double r = discrete_ball_mass(g, eps / 20.0, x, eps) / g.ball_volume(eps);
        worst_mass = std::max(worst_mass, std::abs(r - 1.0));
        o.require(std::abs(r - 1.0) <= 0.05, fmt::format("{} eps {} mass ratio {:.4f}", g.id(), eps, r));
      }
    }
    const double mc = monte_carlo_c_constant(g, 1000000, 7);
    const double err = std::abs(mc / g.c_constant() - 1.0);
    worst_c = std::max(worst_c, err);
    o.require(err <= 0.01, fmt::format("{} C_G Monte Carlo off by {:.3f}", g.id(), err));
  }
  o.note(fmt::format("max |mass ratio - 1| {:.2e}, max C_G MC error {:.2e}", worst_mass, worst_c));
  return o;
}

// ------------------------------------------------------------------ 4
struct Case {
  std::string name;
  CarnotGroup group;
  DomainSpec domain;
  double eps, rho;
  BoundaryDatum psi;
};

Outcome certificate_optimality() {
  Outcome o;
  auto fn = [](auto f, const char* d) { return BoundaryDatum(f, d); };
  const std::vector<Case> cases = {
      {"line step", CarnotGroup::abelian(1), DomainSpec::box({0}, {1}, 0.1), 0.1, 10,
       fn([](std::span<const double> x) { return x[0] > 0.5 ? 1.0 : 0.0; }, "step")},
      {"plane step", CarnotGroup::abelian(2), DomainSpec::box({-.5, -.5}, {.5, .5}, .25), .25, 4,
       fn([](std::span<const double> x) { return x[0] > 0 ? 1.0 : 0.0; }, "step")},
      {"plane smooth", CarnotGroup::abelian(2), DomainSpec::box({-.5, -.5}, {.5, .5}, .25), .25, 4,
       fn([](std::span<const double> x) { return x[0] * x[1] + 0.5 * x[0]; }, "x1 x2 + x1/2")},
      {"plane disc", CarnotGroup::abelian(2), DomainSpec::box({-.5, -.5}, {.5, .5}, .25), .25, 4,
       fn([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] < 0.36 ? 1.0 : 0.0; }, "disc")},
      {"H1 x1", CarnotGroup::heisenberg1(), DomainSpec::box({0, 0, 0}, {.75, .75, .5}, .5), .5, 4,
       fn([](std::span<const double> x) { return x[0]; }, "x1")},
      {"H1 x3", CarnotGroup::heisenberg1(), DomainSpec::box({0, 0, 0}, {1, 1, 1}, .5), .5, 2,
       fn([](std::span<const double> x) { return x[2]; }, "x3")},
      {"H1 step", CarnotGroup::heisenberg1(), DomainSpec::box({0, 0, 0}, {1, 1, 1}, .5), .5, 2,
       fn([](std::span<const double> x) { return x[1] > 0.5 ? 1.0 : 0.0; }, "step x2")},
      {"E4 x1", CarnotGroup::engel4(), DomainSpec::box({0, 0, 0, 0}, {1, 1, 1, 1}, .5), .5, 2,
       fn([](std::span<const double> x) { return x[0]; }, "x1")},
  };
  double worst_gap = 0.0, worst_res = 0.0, slowest = 0.0;
  std::size_t largest = 0;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto dom = build_lattice(c.group, c.domain, c.eps, c.eps / c.rho);
    const auto ker = build_kernel(c.group, dom, c.eps);
    const NonlocalProblem prob(dom, ker, c.psi);
    const auto sol = solve_primal_dual(prob);
    const auto cert = check_certificate(prob, sol.u_psi, sol.dual, 1e-6);
    const double secs = seconds_since(t0);
    largest = std::max(largest, dom.size());
    slowest = std::max(slowest, secs);
    worst_gap = std::max(worst_gap, sol.report.relative_gap);
    worst_res = std::max({worst_res, cert.row_residual, cert.bound_excess, cert.sign_defect});
    o.require(dom.size() <= 2000, c.name + " too large");
    o.require(sol.report.relative_gap <= 1e-6, fmt::format("{} gap {:.2e}", c.name, sol.report.relative_gap));
    o.require(cert.passed, fmt::format("{} certificate rows {:.2e} sign {:.2e}", c.name, cert.row_residual,
                                       cert.sign_defect));
    o.require(secs < 60.0, fmt::format("{} took {:.1f} s", c.name, secs));
  }
  o.note(fmt::format("{} instances, <= {} points, max gap {:.1e}, max residual {:.1e}, slowest {:.2f} s", cases.size(),
                     largest, worst_gap, worst_res, slowest));
  return o;
}

// ------------------------------------------------------------------ 5
Outcome mincut_equivalence() {
  Outcome o;
  using F = std::function<double(std::span<const double>)>;
  struct Bin {
    std::string name;
    int n;
    double eps, rho;
    F psi;
  };
  auto one = [](bool b) { return b ? 1.0 : 0.0; };
  const std::vector<Bin> cases = {
      {"1D step 0.5", 1, 0.1, 10, [&](auto x) { return one(x[0] > 0.5); }},
      {"1D step 0.37", 1, 0.1, 10, [&](auto x) { return one(x[0] > 0.37); }},
      {"1D reversed", 1, 0.2, 10, [&](auto x) { return one(x[0] < 0.61); }},
      {"1D one side", 1, 0.05, 10, [&](auto x) { return one(x[0] < 0.0); }},
      {"2D half plane", 2, 0.25, 4, [&](auto x) { return one(x[0] > 0.0); }},
      {"2D diagonal", 2, 0.25, 4, [&](auto x) { return one(x[0] + x[1] > 0.1); }},
      {"2D quadrant", 2, 0.25, 4, [&](auto x) { return one(x[0] > 0.0 && x[1] > 0.0); }},
      {"2D disc", 2, 0.25, 4, [&](auto x) { return one(x[0] * x[0] + x[1] * x[1] < 0.3); }},
      {"2D checker", 2, 0.25, 4, [&](auto x) { return one(x[0] * x[1] > 0.0); }},
      {"2D stripe", 2, 0.25, 3, [&](auto x) { return one(std::abs(x[1]) < 0.2); }},
  };
  double worst = 0.0;
  std::size_t largest = 0;
  for (const auto& c : cases) {
    const auto g = CarnotGroup::abelian(c.n);
    const DomainSpec spec = c.n == 1 ? DomainSpec::box({0}, {1}, c.eps)
                                     : DomainSpec::box({-.375, -.375}, {.375, .375}, c.eps);
    const auto dom = build_lattice(g, spec, c.eps, c.eps / c.rho);
    const auto ker = build_kernel(g, dom, c.eps);
    const NonlocalProblem prob(dom, ker, BoundaryDatum(c.psi, c.name));
    SolveParams sp;
    sp.tol = 1e-8;
    const auto sol = solve_primal_dual(prob, sp);
    const auto mc = mincut_oracle(prob);
    const double e = problem_energy(prob, sol.u);
    const double d = rel_diff(e, mc.energy);
    worst = std::max(worst, d);
    largest = std::max(largest, dom.size());
    o.require(dom.size() <= 500, c.name + " too large");
    o.require(sol.report.converged, c.name + " not converged");
    o.require(d <= 1e-6, fmt::format("{}: {:.10g} vs {:.10g}", c.name, e, mc.energy));
  }
  o.note(fmt::format("{} instances, <= {} points, max relative difference {:.2e}", cases.size(), largest, worst));
  return o;
}

// ------------------------------------------------------------------ 6
Outcome p_sweep() {
  Outcome o;
  double worst_tail = 0.0;
  for (const char* name : {"line_step", "line_zero", "plane_halfspace"}) {
    const RunConfig cfg = runner::load_config(preset(name));
    const fs::path dir = scratch_dir() / "p_sweep" / name;
    std::ostringstream log;
    runner::cmd_oracle_compare(cfg, dir, log);
    std::ifstream f(dir / "report.json");
    const auto j = nlohmann::json::parse(f);
    for (const auto& inst : j["instances"]) {
      const double tail = inst["p_tail_relative_difference"].get<double>();
      worst_tail = std::max(worst_tail, tail);
      const double eps = inst["eps"].get<double>();
      o.require(inst["p_nonincreasing"].get<bool>(), fmt::format("{} eps {} not monotone", name, eps));
      o.require(inst["p_tail_agrees"].get<bool>(),
                fmt::format("{} eps {}: J(u_1.05) is {:.2f}% above the optimum", name, eps, 100 * tail));
    }
  }
  o.note(fmt::format("largest tail difference {:.2f}%", 100 * worst_tail));
  return o;
}

// ------------------------------------------------------------------ 7
Outcome line_convergence() {
  Outcome o;
  const auto& run = shipped_sweeps().at("line_step");
  const auto& e = run.result.entries;
  o.require(e.size() == 3, "expected three eps values");
  for (std::size_t k = 1; k < e.size(); ++k)
    o.require(e[k].rescaled_energy >= 0.95 && e[k].rescaled_energy <= 1.05,
              fmt::format("eps {} rescaled {:.6f}", e[k].eps, e[k].rescaled_energy));
  o.require(run.monotone_1d, fmt::format("monotonicity violated by {:.2e}", run.monotone_violation));
  std::string vals;
  for (const auto& x : e) vals += fmt::format("{}{:.6f}", vals.empty() ? "" : ", ", x.rescaled_energy);
  o.note("rescaled energies " + vals + fmt::format("; max decrease {:.1e}", run.monotone_violation));
  return o;
}

// ------------------------------------------------------------------ 8
Outcome heisenberg_exact() {
  Outcome o;
  const auto g = CarnotGroup::heisenberg1();
  double worst_row = 0.0, worst_z1 = 0.0, worst_z2 = 0.0, worst_c = 0.0;
  std::size_t bulk_points = 0;
  for (double eps : {0.5, 0.25}) {
    const auto dom = build_lattice(g, DomainSpec::box({0, 0, 0}, {1, 1, 1}, eps), eps, eps / 4);
    const auto ker = build_kernel(g, dom, eps);
    const NonlocalProblem prob(dom, ker, BoundaryDatum([](std::span<const double> x) { return x[0]; }, "x1"));
    std::vector<double> u;
    for (auto i : dom.interior()) u.push_back(dom.coords(i)[0]);
    const auto u_psi = prob.extend(u);
    DualField gf;
    for (const auto& e : ker.edges()) {
      const double d = dom.coords(e.b)[0] - dom.coords(e.a)[0];
      gf.g.push_back(d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0));
    }
    const auto cert = check_certificate(prob, u_psi, gf, 1e-10);
    worst_row = std::max(worst_row, cert.row_residual);
    o.require(cert.passed && cert.row_residual <= 1e-10, fmt::format("eps {} row residual {:.2e}", eps, cert.row_residual));
    const auto zeta = extract_zeta(prob, gf);
    for (std::size_t s = 0; s < zeta.bulk.size(); ++s) {
      if (!zeta.bulk[s]) continue;
      ++bulk_points;
      worst_z1 = std::max(worst_z1, std::abs(zeta.at(s)[0] - 1.0));
      worst_z2 = std::max(worst_z2, std::abs(zeta.at(s)[1]));
    }
    const auto lc = check_local_certificate(dom, u, zeta);
    worst_c = std::max(worst_c, lc.divergence_residual / dom.spacing());
  }
  o.require(bulk_points > 0, "no bulk points");
  o.require(worst_z1 <= 0.05 && worst_z2 <= 0.05, fmt::format("zeta off by {:.2e}, {:.2e}", worst_z1, worst_z2));
  o.require(worst_c <= 1.0, fmt::format("divergence residual / h = {:.2e}", worst_c));

  const auto& run = shipped_sweeps().at("heisenberg_x1");
  const auto& e = run.result.entries;
  for (std::size_t k = 1; k < e.size(); ++k)
    o.require(e[k].l1_distance <= e[k - 1].l1_distance + 1e-8,
              fmt::format("L1 distance grows at eps {}: {:.3e} > {:.3e}", e[k].eps, e[k].l1_distance,
                          e[k - 1].l1_distance));
  double solver_c = 0.0;
  for (std::size_t k = 0; k < run.local.size(); ++k)
    solver_c = std::max(solver_c, run.local[k].divergence_residual / run.h[k]);
  std::string l1;
  for (const auto& x : e) l1 += fmt::format("{}{:.1e}", l1.empty() ? "" : ", ", x.l1_distance);
  o.note(fmt::format("row residual {:.1e}, bulk |zeta1-1| {:.1e} |zeta2| {:.1e} over {} points, "
                     "divergence C {:.1e} (exact g) / {:.1e} (solver g), L1 {}",
                     worst_row, worst_z1, worst_z2, bulk_points, worst_c, solver_c, l1));
  return o;
}

// ------------------------------------------------------------------ 9
Outcome structure_of_derivative() {
  Outcome o;
  const auto g = CarnotGroup::heisenberg1();
  std::vector<double> eps;
  for (int k = 0; k <= 4; ++k) eps.push_back(0.1 / static_cast<double>(1 << k));
  const auto top = structure_pairing_check(g, Polynomial::coordinate(3, 2), eps);
  const auto lin = structure_pairing_check(g, Polynomial::coordinate(3, 0), eps);
  o.require(!top.exact && top.fitted_order >= 0.9, fmt::format("x3 order {:.3f}", top.fitted_order));
  o.require(lin.exact, "x1 errors not exact");
  double lin_max = 0.0;
  for (double e : lin.errors) lin_max = std::max(lin_max, e);
  o.note(fmt::format("x3 fitted order {:.4f}; x1 max error {:.1e}", top.fitted_order, lin_max));
  return o;
}

// ------------------------------------------------------------------ 10
Outcome uniform_estimate() {
  Outcome o;
  std::string slopes;
  for (const auto& [name, run] : shipped_sweeps()) {
    const auto rep = uniform_estimate_check(run.result.entries);
    o.require(rep.bounded, fmt::format("{} slope {:.3f}", name, rep.slope));
    slopes += fmt::format("{}{} {:.3f}", slopes.empty() ? "" : ", ", name, rep.slope);
  }
  o.note("slopes: " + slopes);
  return o;
}

// ------------------------------------------------------------------ 11
std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  return files;
}

Outcome reproducibility() {
  Outcome o;
  const unsigned saved = thread_count();
  std::size_t compared = 0;
  using Cmd = std::function<int(const fs::path&)>;
  const RunConfig line = runner::load_config(preset("line_step"));
  const RunConfig plane = runner::load_config(preset("plane_halfspace"));
  std::ostringstream log;
  const std::vector<std::pair<std::string, Cmd>> cmds = {
      {"group-check", [&](const fs::path& d) { return runner::cmd_group_check("heisenberg1", {}, d, log); }},
      {"lemma-check",
       [&](const fs::path& d) {
         const std::vector<double> eps = {0.1, 0.05, 0.025};
         return runner::cmd_lemma_check("engel4", "cubic", eps, d, log);
       }},
      {"solve", [&](const fs::path& d) { return runner::cmd_solve(plane, d, log); }},
      {"sweep", [&](const fs::path& d) { return runner::cmd_sweep(line, d, log); }},
      {"oracle-compare", [&](const fs::path& d) { return runner::cmd_oracle_compare(line, d, log); }},
  };
  for (const auto& [name, cmd] : cmds) {
    const fs::path a = scratch_dir() / "repro" / name / "a";
    const fs::path b = scratch_dir() / "repro" / name / "b";
    set_thread_count(1);
    const int ca = cmd(a);
    set_thread_count(3);
    const int cb = cmd(b);
    o.require(ca == cb, name + " exit codes differ");
    const auto fa = read_tree(a), fb = read_tree(b);
    o.require(!fa.empty() && fa.size() == fb.size(), name + " file sets differ");
    for (const auto& [rel, bytes] : fa) {
      const auto it = fb.find(rel);
      o.require(it != fb.end() && it->second == bytes, name + "/" + rel + " differs");
      ++compared;
    }
  }
  set_thread_count(saved);
  o.note(fmt::format("{} file pairs byte-identical across 1 and 3 threads", compared));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"group algebra suite", group_algebra},
      {"horizontal gradient lemma", horizontal_lemma},
      {"ball geometry", ball_geometry},
      {"certificate optimality", certificate_optimality},
      {"min-cut oracle equivalence", mincut_equivalence},
      {"p to 1 cross-check", p_sweep},
      {"1D convergence", line_convergence},
      {"Heisenberg exact solution", heisenberg_exact},
      {"structure of the derivative", structure_of_derivative},
      {"uniform estimate", uniform_estimate},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    failed += out.pass ? 0 : 1;
    fmt::print("{} [{:2}] {}: {} ({:.1f} s)\n", out.pass ? "PASS" : "FAIL", index, c.name, out.detail,
               seconds_since(t0));
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  fmt::print("{} of {} criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
