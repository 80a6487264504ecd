#include "helpers.hpp"
#include "latmix/mincut.hpp"

#include <doctest.h>

#include <sstream>

using namespace latmix;

TEST_SUITE("mincut") {

TEST_CASE("empty region gives an empty instance") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const BondField f = test::homogeneous(V, Bond::Alpha);
  const HalfSpaceTrace trace(make_vec({0, 0}), make_vec({1, 0}));
  const CutInstance inst = build_instance(f, {}, trace);
  CHECK(inst.node_count == 0);
  CHECK(solve_min_cut(inst).value == 0.0);
  CHECK(brute_force_ground_state(f, {}, trace).value == 0.0);
  CHECK_THROWS_AS(build_ball_instance(f, make_vec({0, 0}), 1.0, trace), Error);
}

TEST_CASE("ball problems match exhaustive enumeration") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const BondField f = test::homogeneous(V, Bond::Alpha);
  for (const Vec& nu : {make_vec({0, 1}), make_vec({1, 0})}) {
    const Vec c = make_vec({0, 0});
    const HalfSpaceTrace trace(c, nu);
    const auto sites = ball_sites(c, 3.0);
    CHECK(sites.size() == 25);
    const double cut = solve_min_cut(build_instance(f, sites, trace)).value;
    CHECK(cut == brute_force_ground_state(f, sites, trace).value);
    CHECK(cut == 5.0);  // one broken bond in each of the 5 columns through the ball
  }
}

TEST_CASE("single free site by hand") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const BondField f = test::homogeneous(V, Bond::Alpha);
  const HalfSpaceTrace trace(make_vec({0, 0}), make_vec({0, 1}));
  const std::vector<Point> one{make_point({0, 0})};
  // site at -1 breaks (0,0)-(0,1); at +1 it breaks (0,-1)-(0,0) and both horizontals
  const CutResult r = brute_force_ground_state(f, one, trace);
  CHECK(r.value == 1.0);
  CHECK(r.node_values[0] == -1);
  CHECK(solve_min_cut(build_instance(f, one, trace)).value == 1.0);
}

TEST_CASE("solvers agree with brute force on random windows") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 3.0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const BondField f = test::random_field(V, 4, 0.5, seed);
    const Box w(make_point({-2, -1}), make_point({4, 4}));
    const auto region = test::box_points(w);
    const double a = 0.3 + 0.1 * static_cast<double>(seed % 5);
    const HalfSpaceTrace trace(make_vec({0.25, 0.5}), make_vec({std::cos(a), std::sin(a)}));
    const CutInstance inst = build_instance(f, region, trace);
    const CutResult bk = solve_min_cut(inst, Solver::BoykovKolmogorov);
    const CutResult dn = solve_min_cut(inst, Solver::Dinic);
    const CutResult bf = brute_force_ground_state(f, region, trace);
    CHECK(bk.value == bf.value);
    CHECK(dn.value == bf.value);
    CHECK(cut_value(inst, bk.node_values) == bk.value);
    CHECK(evaluate_energy(f, bk.state, trace, region, BondScope::TouchingRegion) == doctest::Approx(bk.value));
  }
}

TEST_CASE("non-integer strengths fall back to doubles") {
  const InteractionSet V(2, {make_point({1, 0}), make_point({0, 1})}, {1.0 / 3.0, M_PI / 10}, {2.0 / 3.0, 1.0});
  const BondField f = test::random_field(V, 2, 0.5, 1);
  const Box w(make_point({-2, -2}), make_point({4, 4}));
  const auto region = test::box_points(w);
  const HalfSpaceTrace trace(make_vec({0, 0}), make_vec({0.6, 0.8}));
  const CutResult r = solve_min_cut(build_instance(f, region, trace));
  CHECK(!r.scaled_value);
  CHECK(r.value == doctest::Approx(brute_force_ground_state(f, region, trace).value).epsilon(1e-12));
}

TEST_CASE("homogeneity, sign symmetry and zero capacities") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  const BondField f = test::random_field(V, 4, 0.5, 4);
  const Vec c = make_vec({0.5, 0.5});
  const Vec nu = make_vec({0.28, 0.96});
  const auto sites = ball_sites(c, 8.0);
  const CutInstance inst = build_instance(f, sites, HalfSpaceTrace(c, nu));
  const double v = solve_min_cut(inst).value;
  CHECK(solve_min_cut(inst.scaled(2.0)).value == 2.0 * v);
  CHECK(solve_min_cut(build_instance(f, sites, HalfSpaceTrace(c, nu).complement())).value == v);
  CHECK(solve_min_cut(inst.scaled(0.0)).value == 0.0);
}

TEST_CASE("pins and abstract graphs") {
  CutInstance g;
  for (int k = 0; k < 4; ++k) g.add_node();
  g.add_edge(0, 1, 3.0);
  g.add_edge(1, 2, 1.0);
  g.add_edge(2, 3, 3.0);
  g.add_terminal(0, 5.0, 0.0);
  g.add_terminal(3, 0.0, 5.0);
  CHECK(solve_min_cut(g).value == 1.0);
  CHECK(solve_min_cut(g, Solver::Dinic).value == 1.0);
  g.pin(2, 1);
  CHECK(solve_min_cut(g).value == 3.0);
  std::ostringstream out;
  write_instance(out, g);
  CHECK(out.str().rfind("6 ", 0) == 0);
}

TEST_CASE("brute force size limit") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const BondField f = test::homogeneous(V, Bond::Alpha);
  const auto region = test::box_points(Box::cube(2, 6));
  CHECK_THROWS_AS(brute_force_ground_state(f, region, HalfSpaceTrace(make_vec({0, 0}), make_vec({1, 0}))), Error);
}

}
