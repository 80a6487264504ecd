#include "helpers.hpp"
#include "latmix/designer.hpp"

#include <doctest.h>

#include <cmath>

using namespace latmix;

TEST_SUITE("designer") {

TEST_CASE("rationals") {
  CHECK(Rational::parse("2/4") == Rational(1, 2));
  CHECK(Rational::parse("-3/-6").str() == "1/2");
  CHECK(Rational::parse("1").str() == "1");
  CHECK_THROWS_AS(Rational::parse("1/x"), Error);
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("target validation") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  CHECK_NOTHROW(DesignTarget::uniform(2, Rational(1, 2)).validate(V));
  CHECK_THROWS_AS(DesignTarget::uniform(2, Rational(0, 1)).validate(V), Error);
  CHECK_THROWS_AS(DesignTarget::uniform(2, Rational(1, 1)).validate(V), Error);
  CHECK_THROWS_AS(DesignTarget::uniform(3, Rational(1, 2)).validate(V), Error);
  CHECK_THROWS_AS((DesignTarget{{Rational(1, 2), Rational(1, 2)}, {Rational(1, 4), Rational(1, 2)}}.validate(V)), Error);
}

TEST_CASE("orthogonal bases") {
  for (const Point& xi : {make_point({1, 0}), make_point({1, -1}), make_point({2, 3})}) {
    const auto b = orthogonal_basis_for(xi);
    CHECK(b.back() == xi);
    CHECK(b[0].dot(xi) == 0);
  }
  const auto b3 = orthogonal_basis_for(make_point({1, 1, 0}));
  REQUIRE(b3.size() == 3);
  CHECK(b3[0].dot(b3[1]) == 0);
  CHECK(b3[0].dot(b3[2]) == 0);
  CHECK(b3[1].dot(b3[2]) == 0);
}

TEST_CASE("line crossing counts") {
  const auto basis = canonical_basis(2);
  CHECK(count_C(make_point({0, 1}), make_point({0, 1}), 4, basis, Point::Zero(2)) == 1);
  CHECK(count_C(make_point({1, 1}), make_point({0, 1}), 4, basis, Point::Zero(2)) == 1);
  CHECK(count_C(make_point({1, 1}), make_point({0, 1}), 4, basis, Point::Zero(2)) <= 2);
  CHECK(count_C(make_point({1, 2}), make_point({0, 1}), 4, basis, Point::Zero(2)) == 2);
  CHECK_THROWS_AS(count_C(make_point({1, 0}), make_point({0, 1}), 4, basis, Point::Zero(2)), Error);
  CHECK_THROWS_AS(count_C(make_point({0, 1}), make_point({1, 0}), 4, basis, Point::Zero(2)), Error);
}

TEST_CASE("period search") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  const auto half = DesignTarget::uniform(2, Rational(1, 2));
  const int T = choose_period(half, V);
  CHECK(T % 2 == 0);
  CHECK((T * T) % 2 == 0);
  for (int q : {3, 4, 5}) CHECK(choose_period(DesignTarget::uniform(2, Rational(1, q)), V) % q == 0);
  CHECK_THROWS_AS(choose_period(DesignTarget::uniform(2, Rational(1, 3)), V, 2), Error);
}

TEST_CASE("designed fields hit the target exactly") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 2.0);
  for (int p : {1, 2, 3}) {
    const Rational q(p, 4);
    const DesignResult r = design_microstructure(DesignTarget::uniform(2, q), V);
    const VolumeFractions f = volume_fractions(r.field);
    for (std::size_t k = 0; k < 2; ++k) CHECK(f.beta_counts[k] * q.den == q.num * f.cell_sites);

    // A-lines carry an alpha bond, complement lines are all beta
    const auto counts = line_counts(r.field);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(counts[k].lines - counts[k].beta_lines == r.audit[k].alpha_lines);
      CHECK(counts[k].beta_lines * q.den == q.num * counts[k].lines);
    }
    const DesignVerification v = verify_design(r, {});
    CHECK(v.fractions_exact);
    CHECK(v.line_fractions_exact);
    CHECK(v.projection_ok);
    CHECK(v.membership.feasible);
  }
}

TEST_CASE("nn plus diagonal design at one half") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  const DesignResult r = design_microstructure(DesignTarget::uniform(4, Rational(1, 2)), V);
  CHECK(volume_fractions(r.field).total == 0.5);
  const DesignVerification v = verify_design(r, {});
  CHECK(v.ok);
  for (const auto& a : r.audit) CHECK(a.designated_alpha <= a.alpha_capacity);
}

}
