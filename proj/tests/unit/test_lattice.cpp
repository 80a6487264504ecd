#include "helpers.hpp"
#include "latmix/field_io.hpp"
#include "latmix/lattice.hpp"

#include <doctest.h>

using namespace latmix;
using latmix::test::box_points;

TEST_SUITE("lattice") {

TEST_CASE("interaction set validation") {
  CHECK_THROWS_AS(InteractionSet(2, {make_point({1, 0})}, {1.0}, {2.0}), Error);  // e_2 missing
  CHECK_THROWS_AS(InteractionSet(2, {make_point({1, 0}), make_point({0, 1})}, {2.0, 1.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(InteractionSet(4, {}, {}, {}), Error);
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  CHECK(V.range() == 1);
  CHECK(V.index_of(make_point({1, -1})) == 3);
  CHECK(V.index_of(make_point({-1, 1})) == -1);
  CHECK(V.integer_scale() == 1);
  CHECK(InteractionSet::nearest_neighbour(2, 0.5, 1.25).integer_scale() == 4);
}

TEST_CASE("ground state has zero energy") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const BondField f = test::homogeneous(V, Bond::Alpha);
  const Box w(make_point({-2, -2}), make_point({4, 4}));
  const HalfSpaceTrace above(make_vec({0, -100}), make_vec({0, 1}));  // +1 near the window
  CHECK(evaluate_energy(f, SpinState(w, 1), above, box_points(w)) == 0.0);
  CHECK(evaluate_energy(f, SpinState(w, -1), above.complement(), box_points(w), BondScope::TouchingRegion) == 0.0);
}

TEST_CASE("flat interface energy by hand count") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 3.0);
  const BondField f = test::homogeneous(V, Bond::Alpha);
  const Box w(make_point({-2, -2}), make_point({4, 4}));
  const HalfSpaceTrace trace(make_vec({0, 0}), make_vec({0, 1}));
  const SpinState u = SpinState::from_trace(w, trace);
  const auto region = box_points(w);
  CHECK(evaluate_energy(f, u, trace, region) == doctest::Approx(4.0));

  // one interface bond at column 0 becomes beta
  const auto W = BondField::windowed(V, w, std::vector<std::vector<Bond>>(2, std::vector<Bond>(w.size(), Bond::Alpha)),
                                     Bond::Alpha)
                     .with_label(make_point({0, 0}), 1, Bond::Beta);
  CHECK(evaluate_energy(W, u, trace, region) == doctest::Approx(3.0 + 3.0));
}

TEST_CASE("energy: spin flip symmetry, additivity and monotonicity") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.5);
  const BondField f = test::random_field(V, 4, 0.5, 7);
  const Box w(make_point({-3, -3}), make_point({6, 6}));
  const HalfSpaceTrace trace(make_vec({0.1, 0.2}), make_vec({0.6, 0.8}));
  SplitMix64 rng(11);
  std::vector<std::int8_t> vals(w.size()), neg(w.size());
  for (std::size_t n = 0; n < w.size(); ++n) {
    vals[n] = rng.below(2) ? 1 : -1;
    neg[n] = static_cast<std::int8_t>(-vals[n]);
  }
  const SpinState u(w, vals), v(w, neg);
  const auto region = box_points(w);
  const double e = evaluate_energy(f, u, trace, region);
  CHECK(evaluate_energy(f, v, trace.complement(), region) == e);

  // splitting the region splits the base-in-region sum
  std::vector<Point> left, right;
  for (const Point& p : region) (p[0] < 0 ? left : right).push_back(p);
  CHECK(evaluate_energy(f, u, trace, left) + evaluate_energy(f, u, trace, right) == doctest::Approx(e));

  // raising one coefficient never lowers the energy
  const BondField g = test::homogeneous(V, Bond::Alpha, 4);
  const BondField h = test::homogeneous(V, Bond::Beta, 4);
  CHECK(evaluate_energy(g, u, trace, region) <= e);
  CHECK(e <= evaluate_energy(h, u, trace, region));
}

TEST_CASE("half-space trace maps the plane to -1") {
  const HalfSpaceTrace t(make_vec({0, 0}), make_vec({0, 1}));
  CHECK(t.value(make_point({5, 0})) == -1);
  CHECK(t.value(make_point({5, 1})) == 1);
  CHECK(t.complement().value(make_point({5, 0})) == 1);
  CHECK_THROWS_AS(HalfSpaceTrace(make_vec({0, 0}), make_vec({0, 2})), Error);
}

TEST_CASE("volume fractions") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  CHECK(volume_fractions(test::homogeneous(V, Bond::Beta, 3)).total == 1.0);
  CHECK(volume_fractions(test::homogeneous(V, Bond::Alpha, 5)).total == 0.0);

  std::vector<std::vector<Bond>> labels(2, std::vector<Bond>(4, Bond::Alpha));
  labels[0][0] = Bond::Beta;  // c_{i,e_1} = beta iff i = 0 mod 2
  const auto f = volume_fractions(BondField::periodic(V, 2, labels));
  CHECK(f.per_direction[0] == 0.25);
  CHECK(f.per_direction[1] == 0.0);
  CHECK(f.total == 0.125);

  const auto r = volume_fractions(test::random_field(V, 4, 0.5, 3));
  CHECK(r.beta_counts[0] == 8);
  CHECK(r.beta_counts[1] == 8);

  const auto lam = make_field(LaminateSpec{{0}, 1, 1, 1}, V, 2);
  CHECK(lam.label(make_point({0, 1}), 0) == Bond::Beta);
  CHECK(lam.label(make_point({0, 0}), 0) == Bond::Alpha);
  CHECK(volume_fractions(lam).per_direction[0] == 0.5);

  const auto W = BondField::windowed(V, Box::cube(2, 2), labels, Bond::Beta);
  CHECK_THROWS_AS(volume_fractions(W), Error);
}

TEST_CASE("random fields are reproducible") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  CHECK(test::random_field(V, 8, 0.3, 42) == test::random_field(V, 8, 0.3, 42));
  CHECK(!(test::random_field(V, 8, 0.3, 42) == test::random_field(V, 8, 0.3, 43)));
  SplitMix64 a(1);
  CHECK(a.next() == 0x910a2dec89025cc1ULL);
}

TEST_CASE("field text round trip") {
  const auto V = InteractionSet(3, {make_point({1, 0, 0}), make_point({0, 1, 0}), make_point({0, 0, 1})},
                                {1.0, 0.5, 0.25}, {2.0, 1.5, 1.0 / 3.0});
  const BondField f = test::random_field(V, 3, 0.4, 5);
  const std::string text = serialize_field(f);
  const BondField g = parse_field(text);
  CHECK(g == f);
  CHECK(serialize_field(g) == text);
  CHECK(field_fingerprint(g) == field_fingerprint(f));
  CHECK_THROWS_AS(parse_field("d=2\nT=2\n"), Error);
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("translation") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const BondField f = test::random_field(V, 4, 0.5, 9);
  const BondField g = f.translated(make_point({1, 3}));
  CHECK(g.label(make_point({0, 0}), 1) == f.label(make_point({1, 3}), 1));
  CHECK(g.translated(make_point({3, 1})) == f);
}

}
