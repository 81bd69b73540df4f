#include <doctest.h>

#include <cmath>
#include <lgp/lgp.hpp>

using namespace lgp;

TEST_CASE("1D sweep rescaled energies") {
  SweepPlan plan;
  plan.psi = BoundaryDatum([](std::span<const double> x) { return x[0] > 0.5 ? 1.0 : 0.0; }, "step");
  plan.domain = DomainSpec::box({0}, {1}, 0.2);
  plan.eps = {0.2, 0.1};
  plan.rho = 10;
  const auto res = sweep_epsilon(plan);
  REQUIRE(res.entries.size() == 2);
  CHECK(res.all_converged);
  for (const auto& e : res.entries) CHECK(e.rescaled_energy == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::isnan(res.entries[0].l1_distance));
  const auto ue = uniform_estimate_check(res.entries);
  CHECK(ue.bounded);
  CHECK(ue.slope == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("sweep plan validation") {
  SweepPlan plan;
  plan.eps = {0.1, 0.2};
  CHECK_THROWS_AS(sweep_epsilon(plan), std::invalid_argument);
  plan.eps = {};
  CHECK_THROWS_AS(sweep_epsilon(plan), std::invalid_argument);
  plan.eps = {0.2};
  plan.rho = 1.5;
  CHECK_THROWS_AS(sweep_epsilon(plan), std::invalid_argument);
}

TEST_CASE("zero datum") {
  SweepPlan plan;
  plan.eps = {0.2, 0.1};
  const auto res = sweep_epsilon(plan);
  for (const auto& e : res.entries) {
    CHECK(e.energy == 0.0);
    CHECK(e.uniform_estimate == 0.0);
  }
}

TEST_CASE("structure pairing on H1") {
  const auto g = CarnotGroup::heisenberg1();
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  CHECK(structure_pairing_check(g, Polynomial::coordinate(3, 0), eps).exact);
  const auto top = structure_pairing_check(g, Polynomial::coordinate(3, 2), eps);
  CHECK_FALSE(top.exact);
  CHECK(top.fitted_order >= 0.9);
  const Polynomial one(3, {Polynomial::Term{1.0, {}}});
  const auto c = structure_pairing_check(g, one, eps);
  CHECK(c.reference == 0.0);
  CHECK(c.exact);
}

TEST_CASE("zeta and local certificate for u = x1 on H1") {
  const auto g = CarnotGroup::heisenberg1();
  const auto dom = build_lattice(g, DomainSpec::box({0, 0, 0}, {1, 1, 1}, 0.5), 0.5, 0.125);
  const auto ker = build_kernel(g, dom, 0.5);
  const NonlocalProblem prob(dom, ker, BoundaryDatum([](std::span<const double> x) { return x[0]; }, "x1"));
  std::vector<double> u;
  for (auto i : dom.interior()) u.push_back(dom.coords(i)[0]);
  DualField gf;
  for (const auto& e : ker.edges()) {
    const double d = dom.coords(e.b)[0] - dom.coords(e.a)[0];
    gf.g.push_back(d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0));
  }
  const auto zeta = extract_zeta(prob, gf);
  for (std::size_t s = 0; s < zeta.bulk.size(); ++s) {
    if (!zeta.bulk[s]) continue;
    CHECK(zeta.at(s)[0] == doctest::Approx(1.0));
    CHECK(std::abs(zeta.at(s)[1]) < 1e-12);
  }
  const auto rep = check_local_certificate(dom, u, zeta);
  CHECK(rep.zeta_feasible);
  CHECK(rep.pairing_defect == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(local_tv_estimate(g, dom, u) == doctest::Approx(1.0).epsilon(0.1));

  ZetaField big = zeta;
  for (double& v : big.values) v *= 1.5;
  big.sup_norm *= 1.5;
  CHECK_FALSE(check_local_certificate(dom, u, big).zeta_feasible);

  DualField none;
  none.g.assign(ker.edges().size(), 0.0);
  CHECK(extract_zeta(prob, none).sup_norm == 0.0);
}

TEST_CASE("compare_to_reference") {
  const auto g = CarnotGroup::abelian(1);
  const auto dom = build_lattice(g, DomainSpec::box({0}, {1}, 0.1), 0.1, 0.05);
  std::vector<double> a(dom.interior().size(), 1.0), b(dom.interior().size(), 0.0);
  CHECK(compare_to_reference(a, a, dom) == 0.0);
  CHECK(compare_to_reference(a, b, dom) == doctest::Approx(1.0));
  b.pop_back();
  CHECK_THROWS_AS(compare_to_reference(a, b, dom), std::invalid_argument);
}

TEST_CASE("csv number format") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(std::nan("")) == "nan");
  CHECK(io::format_double(1e-300) == "1e-300");
}
