#include <doctest.h>

#include <filesystem>
#include <lgp_runner/commands.hpp>
#include <sstream>
#include <unistd.h>

using namespace lgp;
using namespace lgp::runner;

namespace {

RunConfig line_config(const std::string& psi) {
  return parse_config("[group]\nid = abelian1\n[domain]\nlower = 0\nupper = 1\n[datum]\npsi = " + psi +
                      "\n[sweep]\neps = 0.2 0.1\nrho = 10\n");
}

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lgp_unit_" + std::to_string(::getpid())) / name;
}

// Engel law with the degree-3 correction doubled: no longer associative.
CarnotGroup broken_engel() {
  const auto real = CarnotGroup::engel4();
  return CarnotGroup::custom(
      "engel4-bug", StratificationSpec({2, 1, 1}),
      [](const double* x, const double* y, double* out) {
        const double br = x[0] * y[1] - x[1] * y[0];
        out[0] = x[0] + y[0];
        out[1] = x[1] + y[1];
        out[2] = x[2] + y[2] + 0.5 * br;
        out[3] = x[3] + y[3] + 0.5 * (x[0] * y[2] - x[2] * y[0]) + 0.5 * (x[1] * y[2] - x[2] * y[1]) +
                 (1.0 / 6.0) * (x[0] + x[1] - y[0] - y[1]) * br;
      },
      [real](const double* x, FrameMatrix& frame) {
        frame = real.horizontal_frame(GroupPoint(std::span<const double>(x, 4)));
      });
}

}  // namespace

TEST_CASE("expression parser") {
  const auto e = Expression::parse("step(x1 - 0.5) + 2*max(x2, -x1) / 4 - sign(-3)", 2);
  const std::vector<double> x = {0.75, 0.1};
  CHECK(e(x) == doctest::Approx(1.0 + 0.5 * 0.1 + 1.0));
  CHECK(e.max_coordinate() == 2);
  CHECK(Expression::parse("-(x1)", 1)(std::vector<double>{2.0}) == -2.0);
  CHECK(Expression::parse("min(1, 2)", 1)(std::vector<double>{0.0}) == 1.0);
  CHECK_THROWS_AS(Expression::parse("x3", 2), UsageError);
  CHECK_THROWS_AS(Expression::parse("x1 +", 1), UsageError);
  CHECK_THROWS_AS(Expression::parse("foo(x1)", 1), UsageError);
  CHECK_THROWS_AS(Expression::parse("(x1", 1), UsageError);
}

TEST_CASE("config parsing") {
  const auto c = line_config("x1");
  CHECK(c.group_id == "abelian1");
  CHECK(c.halo_width == 0.2);
  CHECK(c.eps.size() == 2);
  CHECK(run_id(c) == run_id(line_config("x1")));
  CHECK(run_id(c) != run_id(line_config("x1 + 1")));
  CHECK(run_id(c).size() == 40);
  CHECK_THROWS_AS(parse_config("[group]\nid = abelian1\ncolour = red\n"), UsageError);
  CHECK_THROWS_AS(parse_config("[bogus]\nx = 1\n"), UsageError);
  CHECK_THROWS_AS(parse_config("[group]\nid = nope\n"), UsageError);
  CHECK_THROWS_AS(parse_config("[group]\nid = abelian1\n[domain]\nlower = 0\nupper = 1\n[sweep]\neps = 0.1 0.2\n"),
                  UsageError);
  CHECK(parse_list("0.1, 0.05;0.025") == std::vector<double>{0.1, 0.05, 0.025});
}

TEST_CASE("group-check exit codes") {
  std::ostringstream log;
  GroupCheckOptions opt;
  opt.samples = 500;
  CHECK(cmd_group_check("heisenberg1", opt, std::nullopt, log) == kExitOk);
  CHECK(cmd_group_check("klein", opt, std::nullopt, log) == kExitUsage);
  CHECK(cmd_group_check(broken_engel(), opt, std::nullopt, log) == kExitNumerical);
}

TEST_CASE("lemma-check exit codes") {
  std::ostringstream log;
  const std::vector<double> eps = {0.1, 0.05, 0.025, 0.0125};
  CHECK(cmd_lemma_check("heisenberg1", "top", eps, std::nullopt, log) == kExitOk);
  CHECK(cmd_lemma_check("heisenberg1", "x1", eps, std::nullopt, log) == kExitOk);
  const std::vector<double> one = {0.1};
  CHECK(cmd_lemma_check("heisenberg1", "top", one, std::nullopt, log) == kExitUsage);
  CHECK(cmd_lemma_check("heisenberg1", "nope", eps, std::nullopt, log) == kExitUsage);
}

TEST_CASE("solve, sweep and oracle-compare exit codes") {
  std::ostringstream log;
  auto step = line_config("step(x1 - 0.5)");
  CHECK(cmd_solve(step, tmp("solve"), log) == kExitOk);
  CHECK(std::filesystem::exists(tmp("solve") / "solution.csv"));
  CHECK(std::filesystem::exists(tmp("solve") / "dual.csv"));
  CHECK(std::filesystem::exists(tmp("solve") / "report.json"));
  CHECK(cmd_solve(line_config("0"), std::nullopt, log) == kExitOk);

  auto capped = step;
  capped.solver.max_iter = 1;
  capped.solver.warm_start = false;
  CHECK(cmd_solve(capped, std::nullopt, log) == kExitNumerical);

  CHECK(cmd_sweep(step, tmp("sweep"), log) == kExitOk);
  CHECK(std::filesystem::exists(tmp("sweep") / "sweep.csv"));
  auto single = step;
  single.eps = {0.1};
  CHECK(cmd_sweep(single, std::nullopt, log) == kExitUsage);
  auto empty = step;
  empty.eps.clear();
  CHECK(cmd_sweep(empty, std::nullopt, log) == kExitUsage);

  CHECK(cmd_oracle_compare(step, std::nullopt, log) == kExitOk);
  auto ramp = line_config("x1");
  ramp.mincut = "on";
  CHECK(cmd_oracle_compare(ramp, std::nullopt, log) == kExitUsage);

  std::filesystem::remove_all(tmp(""));
}
