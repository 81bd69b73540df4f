#include <doctest.h>

#include <cmath>
#include <lgp/lgp.hpp>

using namespace lgp;

TEST_CASE("1D lattice and kernel weights") {
  const auto g = CarnotGroup::abelian(1);
  const auto dom = build_lattice(g, DomainSpec::box({0}, {1}, 0.1), 0.1, 0.01);
  CHECK(dom.interior().size() == 100);
  CHECK(dom.halo().size() == 20);
  const auto ker = build_kernel(g, dom, 0.1);
  // An interior row: 18 neighbours at h/M, the two tied cells at h/(2M), remainder on the self-loop.
  const auto i = dom.interior()[50];
  const auto row = ker.row(i);
  CHECK(row.size() == 20);
  int full = 0, half = 0;
  for (const auto& nb : row) {
    const double w = ker.edges()[nb.edge].weight;
    if (std::abs(w - 0.05) < 1e-12) ++full;
    if (std::abs(w - 0.025) < 1e-12) ++half;
  }
  CHECK(full == 18);
  CHECK(half == 2);
  CHECK(ker.self_weight(i) == doctest::Approx(0.05));
  CHECK(ker.row_sum(i) == doctest::Approx(1.0));
  CHECK(ker.mass_ratio(i) == doctest::Approx(1.0));
}

TEST_CASE("kernel is symmetric and rows are stochastic") {
  const auto g = CarnotGroup::heisenberg1();
  const auto dom = build_lattice(g, DomainSpec::box({0, 0, 0}, {1, 1, 1}, 0.5), 0.5, 0.25);
  const auto ker = build_kernel(g, dom, 0.5);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (!ker.has_row(i)) continue;
    CHECK(ker.row_sum(i) == doctest::Approx(1.0));
    for (const auto& nb : ker.row(i)) {
      const auto& e = ker.edges()[nb.edge];
      CHECK(e.a < e.b);
      CHECK((e.a == i || e.b == i));
    }
  }
  CHECK(ker.min_mass_ratio() == doctest::Approx(1.0));
}

TEST_CASE("lattice validation") {
  const auto g = CarnotGroup::abelian(2);
  const auto spec = DomainSpec::box({0, 0}, {1, 1}, 0.2);
  CHECK_THROWS_AS(build_lattice(g, spec, 0.2, 0.15), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(g, spec, 0.3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(g, DomainSpec::box({0, 0}, {0.01, 0.01}, 0.2), 0.2, 0.1), ConstructionError);
  const auto dom = build_lattice(g, spec, 0.2, 0.05);
  CHECK_THROWS_AS(build_kernel(g, dom, 0.1), std::invalid_argument);
}

TEST_CASE("box-ball domain") {
  const auto g = CarnotGroup::heisenberg1();
  const auto spec = DomainSpec::box_ball(GroupPoint{0, 0, 0}, 1.0, 0.5);
  const double inside[] = {0.2, -0.3, 0.5};
  const double outside[] = {1.2, 0.0, 0.0};
  CHECK(spec.contains(g, inside));
  CHECK_FALSE(spec.contains(g, outside));
  const auto dom = build_lattice(g, spec, 0.5, 0.25);
  CHECK(dom.interior().size() > 0);
}

TEST_CASE("extend and nonlocal energies") {
  const auto g = CarnotGroup::abelian(1);
  const auto dom = build_lattice(g, DomainSpec::box({0}, {1}, 0.1), 0.1, 0.01);
  const auto ker = build_kernel(g, dom, 0.1);
  const auto psi = BoundaryDatum([](std::span<const double> x) { return x[0] > 0.5 ? 1.0 : 0.0; }, "step");
  std::vector<double> u(dom.interior().size());
  for (std::size_t s = 0; s < u.size(); ++s) u[s] = dom.coords(dom.interior()[s])[0] > 0.5 ? 1.0 : 0.0;
  const auto full = extend(dom, u, psi);
  CHECK(nonlocal_tv(dom, ker, full) == doctest::Approx(0.025));
  CHECK(interior_tv(dom, ker, full) == doctest::Approx(0.025));
  CHECK(rescaled_gradient_norm(dom, ker, full, 1.0) == doctest::Approx(1.0).epsilon(0.05));
  std::vector<double> zero(u.size(), 0.0);
  CHECK(nonlocal_tv(dom, ker, extend(dom, zero, BoundaryDatum::constant(0.0))) == 0.0);
  std::vector<double> bad(u.size(), 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(extend(dom, bad, psi), std::invalid_argument);
  CHECK_THROWS_AS(poincare_ratio(dom, ker, extend(dom, zero, BoundaryDatum::constant(0.0)), 1.0), std::domain_error);
}

TEST_CASE("rescaled gradient norm matches the analytic energy") {
  const auto g = CarnotGroup::heisenberg1();
  const double eps = 0.5;
  const auto dom = build_lattice(g, DomainSpec::box({0, 0, 0}, {1, 1, 1}, eps), eps, eps / 4);
  const auto ker = build_kernel(g, dom, eps);
  std::vector<double> u(dom.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = dom.coords(i);
    u[i] = std::sin(3 * x[0]) + x[1] * x[2];
  }
  const double lhs = rescaled_gradient_norm(dom, ker, u, 1.0);
  const double rhs = 8.0 / eps * 2.0 * nonlocal_tv(dom, ker, u, Normalization::Analytic);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);

  const auto line = CarnotGroup::abelian(1);
  const auto ld = build_lattice(line, DomainSpec::box({0}, {1}, 0.1), 0.1, 0.01);
  const auto lk = build_kernel(line, ld, 0.1);
  std::vector<double> x(ld.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = ld.coords(i)[0];
  // D = (-0.1, 1.1): int_D int_{-1}^{1} chi_D(x + eps z) |z| dz dx = |D| - 2 eps / 3.
  const double q1 = rescaled_gradient_norm(ld, lk, x, 1.0);
  CHECK(q1 == doctest::Approx(1.2 - 0.2 / 3).epsilon(1e-3));
}

TEST_CASE("deterministic parallel sum") {
  std::vector<double> v(100001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  auto sum = [&] {
    return parallel_sum(v.size(), 1000, [&](std::size_t b, std::size_t e) {
      CompensatedSum s;
      for (std::size_t i = b; i < e; ++i) s.add(v[i]);
      return s.value();
    });
  };
  set_thread_count(1);
  const double a = sum();
  set_thread_count(4);
  const double b = sum();
  set_thread_count(1);
  CHECK(a == b);
}
