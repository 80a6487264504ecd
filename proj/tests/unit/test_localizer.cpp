#include "helpers.hpp"
#include "latmix/celltension.hpp"
#include "latmix/localizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace latmix;

TEST_SUITE("localizer") {

TEST_CASE("constant profile without guards is periodic") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const MacroProfile p(V, Domain{make_vec({0, 0}), make_vec({1, 1})}, 1,
                       std::vector<CellFill>(4, HomogeneousSpec{Bond::Alpha}));
  const auto s = synthesize_field(p, 1.0 / 32, 0.0);
  CHECK(s.field.window().size() == 32 * 32);
  for (Bond b : s.field.labels(0)) CHECK(b == Bond::Alpha);
  const auto g = synthesize_field(p, 1.0 / 32, 0.25);
  const auto grid = coarse_grain(g.field, p.domain(), 1.0 / 32, 0.5);
  for (const auto& t : grid.theta) CHECK(*t == doctest::Approx(1.0 - 0.75 * 0.75));
}

TEST_CASE("two-phase profile") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const MacroProfile p = two_phase_profile(V);
  const auto s = synthesize_field(p, 1.0 / 16, 0.0);
  CHECK(s.field.label(make_point({3, 3}), 0) == Bond::Alpha);
  CHECK(s.field.label(make_point({20, 3}), 1) == Bond::Beta);
  const auto g = coarse_grain(s.field, p.domain(), 1.0 / 16, 1.0);
  CHECK(*g.theta[0] == 0.0);
  CHECK(*g.theta[1] == 1.0);
  CHECK(p.cell_theta(1) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("coarse graining") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const Domain dom{make_vec({0, 0}), make_vec({1, 1})};
  const double eps = 1.0 / 32;
  const Box w(Point::Zero(2), Point::Constant(2, 32));
  const auto beta = BondField::windowed(V, w, std::vector<std::vector<Bond>>(2, std::vector<Bond>(w.size(), Bond::Beta)),
                                        Bond::Beta);
  for (const auto& t : coarse_grain(beta, dom, eps, 0.25).theta) CHECK(*t == 1.0);

  std::vector<std::vector<Bond>> checker(2, std::vector<Bond>(w.size(), Bond::Alpha));
  w.for_each([&](std::size_t n, const Point& i) {
    if ((i[0] + i[1]) % 2) checker[0][n] = checker[1][n] = Bond::Beta;
  });
  const auto cb = BondField::windowed(V, w, checker, Bond::Beta);
  const auto fine = coarse_grain(cb, dom, eps, 0.125);
  const auto coarse = coarse_grain(cb, dom, eps, 0.25);
  for (const auto& t : fine.theta) CHECK(*t == 0.5);
  coarse.cells.for_each([&](std::size_t n, const Point& c) {
    std::int64_t sum = 0, sites = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const std::size_t m = fine.cells.index(make_point({2 * c[0] + a, 2 * c[1] + b}));
        sum += fine.beta_counts[m][0];
        sites += fine.sites[m];
      }
    CHECK(sum == coarse.beta_counts[n][0]);
    CHECK(sites == coarse.sites[n]);
  });

  const Domain wide{make_vec({0, 0}), make_vec({1.5, 1})};
  const auto partial = coarse_grain(cb, wide, eps, 0.25);
  CHECK(partial.theta.size() == 24);
  CHECK(!partial.theta[23]);
  CHECK_THROWS_AS(coarse_grain(cb, dom, eps, 0.1), Error);
}

TEST_CASE("local tension") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const MacroProfile p = two_phase_profile(V);
  const double eps = 1.0 / 64;
  const auto s = synthesize_field(p, eps, 0.0);
  const auto left = local_tension(s.field, p.domain(), eps, make_vec({0.5, 0.5}), make_vec({1, 0}), 0.25);
  CHECK(left.value == doctest::Approx(1.0).epsilon(0.05));
  const Vec nu = make_vec({0.6, 0.8});
  const auto right = local_tension(s.field, p.domain(), eps, make_vec({1.5, 0.5}), nu, 0.25);
  const double ref = estimate_phi(test::homogeneous(V, Bond::Beta), nu, {16}, 0).phi_hat;
  CHECK(right.value == doctest::Approx(ref).epsilon(0.05));
  CHECK(local_tension(s.field, p.domain(), eps, make_vec({1.5, 0.5}), -nu, 0.25).raw == right.raw);
  CHECK_THROWS_AS(local_tension(s.field, p.domain(), eps, make_vec({0.1, 0.5}), nu, 0.25), Error);
  CHECK_THROWS_AS(local_tension(s.field, p.domain(), eps, make_vec({0.5, 0.5}), nu, 0.125), Error);
}

TEST_CASE("regularity probes on a homogeneous field") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  const double eps = 1.0 / 64;
  const Domain dom{make_vec({0, 0}), make_vec({1, 1})};
  const Box w(Point::Zero(2), Point::Constant(2, 64));
  const auto f = BondField::windowed(V, w, std::vector<std::vector<Bond>>(4, std::vector<Bond>(w.size(), Bond::Alpha)),
                                     Bond::Alpha);
  const Vec a = make_vec({1, 0});
  std::vector<std::pair<Vec, Vec>> pairs{{a, a}};
  for (double t : {0.05, 0.2, 0.6}) pairs.emplace_back(a, make_vec({std::cos(t), std::sin(t)}));
  const auto rep = m_regularity_probe(f, dom, eps, make_vec({0.5, 0.5}), pairs, {0.25, 0.375});
  CHECK(rep.ok);
  CHECK(rep.angular[0].difference == 0.0);
  CHECK(rep.nested.size() == pairs.size());
}

TEST_CASE("guards shrink with delta") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const MacroProfile p(V, Domain{make_vec({0, 0}), make_vec({1, 1})}, 0,
                       {CellFill{DesignTarget::uniform(2, Rational(1, 4))}});
  double last = 1.0;
  for (double delta : {0.2, 0.1, 0.05}) {
    const auto s = synthesize_field(p, 1.0 / 64, delta);
    const auto g = coarse_grain(s.field, p.domain(), 1.0 / 64, 1.0);
    const double gap = std::abs(*g.theta[0] - 0.25);
    CHECK(gap <= last + 1.0 / 64);
    CHECK(gap <= 4.0 * delta);
    last = gap;
  }
}

}
