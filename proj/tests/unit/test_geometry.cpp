#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fkqsd/errors.hpp"
#include "fkqsd/geometry.hpp"
#include "fkqsd/random.hpp"

using namespace fkqsd;

namespace {

PotentialField coulomb(int d) { return SchrodingerPotential(PotentialSpec{Riesz{1.0, 1.0}, std::nullopt, 0.0, d}); }
PotentialField flat(int d) { return SchrodingerPotential(PotentialSpec{std::monostate{}, std::nullopt, 0.5, d}); }

std::vector<double> pt(std::initializer_list<double> v) { return v; }

}  // namespace

TEST_CASE("contains: ball boundary is outside, singular point is outside") {
  const Domain ball(DomainSpec{Ball{{0.0, 0.0}, 1.0}, 2});
  const auto v = coulomb(2);
  CHECK(contains(ball, v, pt({0.5, 0.0})));
  CHECK_FALSE(contains(ball, v, pt({1.0, 0.0})));
  CHECK_FALSE(contains(ball, v, pt({0.0, 0.0})));
  CHECK(contains(ball, flat(2), pt({0.0, 0.0})));
  CHECK_FALSE(contains(ball, v, pt({0.0, 1.5})));
}

TEST_CASE("contains: full space still excludes the singular set") {
  const Domain full(DomainSpec{FullSpace{}, 3});
  CHECK(contains(full, coulomb(3), pt({1e6, -3.0, 2.0})));
  CHECK_FALSE(contains(full, coulomb(3), pt({0.0, 0.0, 0.0})));
  CHECK(contains(full, coulomb(3), pt({1e-300, 0.0, 0.0})));
}

TEST_CASE("contains: annulus, ball complement and half-space") {
  const auto v = flat(2);
  const Domain ann(DomainSpec{Annulus{0.5, 2.0}, 2});
  CHECK(contains(ann, v, pt({1.0, 0.0})));
  CHECK_FALSE(contains(ann, v, pt({0.5, 0.0})));
  CHECK_FALSE(contains(ann, v, pt({2.0, 0.0})));
  CHECK_FALSE(contains(ann, v, pt({0.1, 0.1})));

  const Domain comp(DomainSpec{BallComplement{{1.0, 1.0}, 1.0}, 2});
  CHECK(contains(comp, v, pt({3.0, 1.0})));
  CHECK_FALSE(contains(comp, v, pt({2.0, 1.0})));
  CHECK_FALSE(contains(comp, v, pt({1.0, 1.0})));

  const Domain half(DomainSpec{HalfSpace{{0.0, 1.0}, 2.0}, 2});
  CHECK(contains(half, v, pt({100.0, 1.9})));
  CHECK_FALSE(contains(half, v, pt({0.0, 2.0})));
  CHECK_FALSE(contains(half, v, pt({0.0, 3.0})));
}

TEST_CASE("contains: interacting configurations exclude coincident particles") {
  const PotentialSpec vinf{std::monostate{}, PowerConfining{2.0, 1.0}, 0.0, 2};
  const PotentialField u = InteractionPotential(InteractionSpec{3, vinf, Riesz{1.0, 1.0}});
  const Domain full(DomainSpec{FullSpace{}, 6});
  CHECK(contains(full, u, pt({0, 0, 1, 0, 0, 1})));
  CHECK_FALSE(contains(full, u, pt({0, 0, 1, 0, 1, 0})));
  CHECK(singularity_distance(u, pt({0, 0, 3, 4, 0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("contains: line charge excludes the axis") {
  const PotentialField c = LineChargePotential(LineChargeSpec{Riesz{1.0, 1.0}, std::nullopt});
  const Domain full(DomainSpec{FullSpace{}, 3});
  CHECK_FALSE(contains(full, c, pt({0.0, 0.0, 5.0})));
  CHECK(contains(full, c, pt({0.0, 1e-9, 5.0})));
  CHECK(singularity_distance(c, pt({3.0, 4.0, -7.0})) == doctest::Approx(5.0));
}

TEST_CASE("singularity_distance") {
  CHECK(singularity_distance(coulomb(2), pt({3.0, 4.0})) == doctest::Approx(5.0));
  CHECK(std::isinf(singularity_distance(flat(2), pt({3.0, 4.0}))));
}

TEST_CASE("dimension mismatch and inconsistent shapes raise") {
  const Domain ball(DomainSpec{Ball{{0.0, 0.0}, 1.0}, 2});
  CHECK_THROWS_AS(contains(ball, coulomb(2), pt({0.1, 0.1, 0.1})), ValidationError);
  CHECK_THROWS_AS(contains(ball, coulomb(3), pt({0.1, 0.1})), ValidationError);
  CHECK_THROWS_AS(Domain(DomainSpec{Ball{{0.0}, 1.0}, 2}), ValidationError);
  CHECK_THROWS_AS(Domain(DomainSpec{Ball{{0.0, 0.0}, -1.0}, 2}), ValidationError);
  CHECK_THROWS_AS(Domain(DomainSpec{Annulus{2.0, 1.0}, 2}), ValidationError);
  CHECK_THROWS_AS(Domain(DomainSpec{HalfSpace{{0.0, 0.0}, 1.0}, 2}), ValidationError);
}

TEST_CASE("property: membership is invariant under rotations about the centre") {
  const Domain ball(DomainSpec{Ball{{0.0, 0.0}, 1.0}, 2});
  const Domain ann(DomainSpec{Annulus{0.3, 0.9}, 2});
  const auto v = coulomb(2);
  RandomStream rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = 1.2 * (2.0 * rng.uniform() - 1.0);
    const double y = 1.2 * (2.0 * rng.uniform() - 1.0);
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    const double rx = std::cos(a) * x - std::sin(a) * y;
    const double ry = std::sin(a) * x + std::cos(a) * y;
    const double r = std::hypot(x, y);
    if (std::abs(r - 1.0) < 1e-12 || std::abs(r - 0.3) < 1e-12 || std::abs(r - 0.9) < 1e-12) continue;
    CHECK(contains(ball, v, pt({x, y})) == contains(ball, v, pt({rx, ry})));
    CHECK(contains(ann, v, pt({x, y})) == contains(ann, v, pt({rx, ry})));
  }
}
