#include <benchmark/benchmark.h>

#include <lgp/lgp.hpp>
#include <random>

using namespace lgp;

static void BM_GroupLaw(benchmark::State& state) {
  const CarnotGroup g = state.range(0) == 0 ? CarnotGroup::heisenberg1() : CarnotGroup::engel4();
  const int n = g.dimension();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> xs(1024 * static_cast<std::size_t>(n));
  for (double& v : xs) v = u(rng);
  double out[kMaxDim];
  std::size_t k = 0;
  for (auto _ : state) {
    const double* x = xs.data() + (k % 1023) * static_cast<std::size_t>(n);
    g.multiply_raw(x, x + n, out);
    benchmark::DoNotOptimize(out);
    ++k;
  }
  state.SetLabel(g.id());
}
BENCHMARK(BM_GroupLaw)->Arg(0)->Arg(1);

static void BM_KernelBuild(benchmark::State& state) {
  const auto g = CarnotGroup::heisenberg1();
  const double eps = 0.5;
  const double rho = static_cast<double>(state.range(0));
  const auto dom = build_lattice(g, DomainSpec::box({0, 0, 0}, {1, 1, 1}, eps), eps, eps / rho);
  std::size_t edges = 0;
  for (auto _ : state) {
    const auto ker = build_kernel(g, dom, eps);
    edges = ker.edges().size();
    benchmark::DoNotOptimize(edges);
  }
  state.counters["points"] = static_cast<double>(dom.size());
  state.counters["edges"] = static_cast<double>(edges);
}
BENCHMARK(BM_KernelBuild)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// Fixed 64 primal-dual iterations from a cold start on a 2D step problem.
static void BM_PrimalDual64(benchmark::State& state) {
  const auto g = CarnotGroup::abelian(2);
  const double eps = 0.25;
  const auto dom = build_lattice(g, DomainSpec::box({-.5, -.5}, {.5, .5}, eps), eps, eps / 4);
  const auto ker = build_kernel(g, dom, eps);
  const NonlocalProblem prob(dom, ker, BoundaryDatum([](std::span<const double> x) { return x[0] > 0 ? 1.0 : 0.0; }, "s"));
  SolveParams p;
  p.max_iter = 64;
  p.tol = 1e-300;
  p.warm_start = false;
  for (auto _ : state) {
    auto sol = solve_primal_dual(prob, p);
    benchmark::DoNotOptimize(sol.report.gap);
  }
  state.counters["edges"] = static_cast<double>(ker.edges().size());
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_PrimalDual64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
