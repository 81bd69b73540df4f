#include <doctest.h>

#include <cmath>
#include <lgp/lgp.hpp>

using namespace lgp;

TEST_CASE("heisenberg law, inverse and dilation") {
  const auto g = CarnotGroup::heisenberg1();
  const GroupPoint x{1, 2, 3}, y{4, 5, 6};
  const auto xy = g.multiply(x, y);
  CHECK(xy[0] == 5);
  CHECK(xy[1] == 7);
  CHECK(xy[2] == doctest::Approx(9 + 0.5 * (1 * 5 - 2 * 4)));
  const auto e = g.multiply(x, g.inverse(x));
  for (int k = 0; k < 3; ++k) CHECK(e[k] == doctest::Approx(0.0));
  const auto d = g.dilate(2.0, x);
  CHECK(d[0] == 2);
  CHECK(d[2] == 12);
}

TEST_CASE("engel product example") {
  const auto g = CarnotGroup::engel4();
  const auto p = g.multiply(GroupPoint{1, 0, 0, 0}, GroupPoint{0, 1, 0, 0});
  CHECK(p[2] == doctest::Approx(0.5));
  CHECK(p[3] == doctest::Approx(0.0));
  CHECK(p[0] == 1);
  CHECK(p[1] == 1);
}

TEST_CASE("box norm, ball volume and C_G") {
  const auto h = CarnotGroup::heisenberg1();
  CHECK(h.box_norm(GroupPoint{0.5, -0.25, 0.81}) == doctest::Approx(0.9));
  CHECK(h.ball_volume(0.5) == doctest::Approx(8.0 * std::pow(0.5, 4)));
  CHECK(h.c_constant() == 4.0);
  CHECK(CarnotGroup::engel4().homogeneous_dimension() == 7);
  CHECK(CarnotGroup::abelian(3).c_constant() == 4.0);
}

TEST_CASE("group ids") {
  CHECK(CarnotGroup::from_id("abelian3").dimension() == 3);
  CHECK(CarnotGroup::from_id("abelian(2)").dimension() == 2);
  CHECK_THROWS_AS(CarnotGroup::from_id("sl2"), std::invalid_argument);
}

TEST_CASE("horizontal frame of H1") {
  const auto h = CarnotGroup::heisenberg1();
  const GroupPoint x{0.3, -0.7, 1.1};
  const auto f = h.horizontal_frame(x);
  CHECK(f(0, 0) == 1);
  CHECK(f(2, 0) == doctest::Approx(-0.5 * x[1]));
  CHECK(f(2, 1) == doctest::Approx(0.5 * x[0]));
}

TEST_CASE("invariant suite passes on the catalog") {
  GroupCheckOptions opt;
  opt.samples = 2000;
  for (const auto& g : {CarnotGroup::abelian(3), CarnotGroup::heisenberg1(), CarnotGroup::engel4()})
    CHECK(run_group_checks(g, opt).passed());
}

TEST_CASE("lemma: horizontally linear functions are exact") {
  const auto g = CarnotGroup::engel4();
  const auto phi = Polynomial::coordinate(4, 1);
  const GroupPoint x{0.1, 0.2, 0.3, 0.4}, z{0.5, -0.5, 0.25, 0.1};
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  const auto rep = verify_horizontal_lemma(g, [&](const GroupPoint& p) { return phi(p); }, phi.gradient(x.values()),
                                           x, z, eps);
  CHECK(rep.exact);
  CHECK(rep.limit == doctest::Approx(-0.5));
}

TEST_CASE("lemma: first order for the top coordinate") {
  const auto g = CarnotGroup::heisenberg1();
  const auto phi = Polynomial::preset("top", 3);
  const GroupPoint x{0.7, -0.4, 0.9}, z{0.6, -0.8, 0.5};
  const std::vector<double> eps = {0.1, 0.05, 0.025, 0.0125};
  const auto rep = verify_horizontal_lemma(g, [&](const GroupPoint& p) { return phi(p); }, phi.gradient(x.values()),
                                           x, z, eps);
  CHECK_FALSE(rep.exact);
  CHECK(rep.fitted_order == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("polynomial presets") {
  const auto p = Polynomial::preset("quad", 3);
  const std::vector<double> x = {1.0, 2.0, 3.0};
  CHECK(p.value(x) == doctest::Approx(2.0 + 9.0));
  const auto grad = p.gradient(x);
  CHECK(grad[0] == doctest::Approx(2.0));
  CHECK(grad[2] == doctest::Approx(6.0));
  CHECK_THROWS_AS(Polynomial::preset("nope", 2), std::invalid_argument);
}
