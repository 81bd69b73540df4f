#include <CLI11.hpp>
#include <fmt/core.h>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "lgp_runner/commands.hpp"

namespace {

using namespace lgp::runner;

unsigned resolve_threads(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("HYPO_LGP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw UsageError(std::string("HYPO_LGP_THREADS must be a positive integer, got \"") + env + "\"");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypo-lgp: nonlocal least gradient experiments on Carnot groups"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, eps_text;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  app.add_option("--config", config_path, "INI experiment config");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--eps", eps_text, "eps list overriding the config, e.g. 0.2,0.1");
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { seed = s; seed_given = true; }, "seed");
  app.add_option("--threads", threads, "worker threads (fallback: HYPO_LGP_THREADS)")->check(CLI::PositiveNumber);

  std::string group_id;
  std::string phi = "top";
  std::size_t samples = 10000;
  auto* group_check = app.add_subcommand("group-check", "randomized group-law invariant suite");
  group_check->add_option("group", group_id, "heisenberg1 | engel4 | abelianN");
  group_check->add_option("--samples", samples, "random triples");
  auto* lemma_check = app.add_subcommand("lemma-check", "difference quotients against <z, X phi>");
  lemma_check->add_option("group", group_id, "heisenberg1 | engel4 | abelianN");
  lemma_check->add_option("--phi", phi, "polynomial preset: xK, top, quad, cubic, mixed");
  auto* solve = app.add_subcommand("solve", "primal-dual solve at the first eps");
  auto* sweep = app.add_subcommand("sweep", "eps sweep with limit diagnostics");
  auto* oracle = app.add_subcommand("oracle-compare", "primal-dual vs min-cut vs p-Laplacian");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    lgp::set_thread_count(resolve_threads(threads));
    const OutDir out = out_dir.empty() ? OutDir{} : OutDir{out_dir};
    std::vector<double> eps_override;
    if (!eps_text.empty()) eps_override = parse_list(eps_text);

    if (group_check->parsed() || lemma_check->parsed()) {
      if (group_id.empty() && !config_path.empty()) group_id = load_config(config_path).group_id;
      if (group_id.empty()) throw UsageError("a group id is required");
      if (group_check->parsed()) {
        lgp::GroupCheckOptions opt;
        opt.samples = samples;
        if (seed_given) opt.seed = seed;
        code = cmd_group_check(group_id, opt, out, std::cout);
      } else {
        std::vector<double> eps = eps_override;
        if (eps_text.empty())
          for (int k = 0; k <= 4; ++k) eps.push_back(0.1 / static_cast<double>(1 << k));
        code = cmd_lemma_check(group_id, phi, eps, out, std::cout);
      }
    } else {
      if (config_path.empty()) throw UsageError("--config is required");
      RunConfig config = load_config(config_path);
      if (!eps_text.empty()) config.eps = eps_override;
      if (seed_given) config.seed = seed;
      resolve(config);
      const OutDir dir = out ? out : OutDir{"out"};
      if (solve->parsed()) code = cmd_solve(config, dir, std::cout);
      else if (sweep->parsed()) code = cmd_sweep(config, dir, std::cout);
      else code = cmd_oracle_compare(config, dir, std::cout);
    }
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitNumerical;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fmt::print(stderr, "elapsed {:.3f} s, exit {}\n", secs, code);
  return code;
}
