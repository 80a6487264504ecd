#include "helpers.hpp"
#include "latmix/bounds.hpp"
#include "latmix/celltension.hpp"

#include <doctest.h>

#include <cmath>

using namespace latmix;

TEST_SUITE("celltension") {

TEST_CASE("evenly spaced directions pair up exactly") {
  const auto dirs = evenly_spaced_directions(64);
  REQUIRE(dirs.size() == 64);
  for (std::size_t k = 0; k < 32; ++k) CHECK(dirs[k + 32] == -dirs[k]);
  CHECK(cube_directions().size() == 26);
}

TEST_CASE("extrapolation is exact on a + b/R") {
  const std::vector<double> R{16, 32, 64, 128};
  std::vector<double> y;
  for (double r : R) y.push_back(1.5 + 4.0 / r);
  CHECK(extrapolate(R, y, 1) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(extrapolate(R, y, 0) == y.back());
  CHECK(extrapolate(R, {-3.0, -2.0, -1.0, -0.5}, 1) == 0.0);
}

TEST_CASE("homogeneous fields reproduce their crystalline densities") {
  const std::vector<double> radii{16, 32, 64};
  const auto nn = InteractionSet::nearest_neighbour(2, 1.5, 4.0);
  CHECK(estimate_phi(test::homogeneous(nn, Bond::Alpha), make_vec({1, 0}), radii).phi_hat ==
        doctest::Approx(1.5).epsilon(0.05));

  const auto diag = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  const BondField beta = test::homogeneous(diag, Bond::Beta);
  CHECK(estimate_phi(beta, make_vec({1, 0}), radii).phi_hat == doctest::Approx(6.0).epsilon(0.05));
  const Vec nu = make_vec({std::cos(0.4), std::sin(0.4)});
  CHECK(estimate_phi(beta, nu, radii).phi_hat == doctest::Approx(diag.beta_tension(nu)).epsilon(0.05));
}

TEST_CASE("laminate matches its projection bound") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.0, 3.0);
  const BondField lam = make_field(LaminateSpec{{0}, 1, 1, 1}, V, 2);
  const Vec e1 = make_vec({1, 0});
  const double p = projection_bound(lam, canonical_basis(2), Point::Zero(2), e1);
  CHECK(p == 2.0);
  CHECK(estimate_phi(lam, e1, {16, 32, 64}).phi_hat == doctest::Approx(p).epsilon(0.05));
}

TEST_CASE("nu and -nu give identical values") {
  const auto V = InteractionSet::nn_diagonal_2d(1.0, 2.0);
  const BondField f = test::random_field(V, 4, 0.5, 21);
  const Vec nu = make_vec({0.6, -0.8});
  const auto a = estimate_phi(f, nu, {8, 16});
  const auto b = estimate_phi(f, -nu, {8, 16});
  CHECK(a.raw == b.raw);
  CHECK(a.phi_hat == b.phi_hat);
}

TEST_CASE("affine estimator") {
  const auto V = InteractionSet::nearest_neighbour(2, 1.25, 4.0);
  const BondField f = test::homogeneous(V, Bond::Alpha, 2);
  for (int K : {1, 2, 4}) CHECK(estimate_phi_affine(f, make_vec({0, 1}), K, 8).phi_hat == doctest::Approx(1.25).epsilon(0.05));

  const Vec nu = make_vec({1, 2}) / std::sqrt(5.0);
  const double ball = estimate_phi(f, nu, {16, 32, 64}).phi_hat;
  const double affine = estimate_phi_affine(f, nu, 2, 8).phi_hat;
  CHECK(std::abs(affine - ball) <= 0.1 * ball);

  const auto one = estimate_phi_affine(test::random_field(V, 4, 0.5, 2), nu, 1, 4);
  REQUIRE(one.normalized.size() == 1);
  CHECK(one.phi_hat == one.normalized[0]);

  CHECK(rational_direction(make_vec({0.6, 0.8})) == make_point({3, 4}));
  CHECK_THROWS_AS(rational_direction(make_vec({1.0, M_PI}).normalized()), Error);
}

TEST_CASE("all-alpha sweep traces the rotated square") {
  const auto V = InteractionSet::nearest_neighbour(2, 2.0, 3.0);
  Schedule s;
  s.radii = {16, 32};
  s.directions = evenly_spaced_directions(64);
  const Sweep sw = direction_sweep(test::homogeneous(V, Bond::Alpha), s);
  REQUIRE(sw.polygon.size() == 64);
  for (std::size_t k = 0; k < 64; ++k) {
    CHECK(sw.polygon[k].lpNorm<1>() == doctest::Approx(0.5).epsilon(0.05));
    CHECK(sw.estimates[k].phi_hat == sw.estimates[(k + 32) % 64].phi_hat);
  }
  CHECK(sw.warnings.empty());

  s.directions = evenly_spaced_directions(4);
  CHECK(!direction_sweep(test::homogeneous(V, Bond::Alpha), s).warnings.empty());
}

TEST_CASE("schedule validation") {
  Schedule s = Schedule::standard(2);
  CHECK_NOTHROW(s.validate(1));
  s.radii = {1.0};
  CHECK_THROWS_AS(s.validate(1), Error);
}

}
