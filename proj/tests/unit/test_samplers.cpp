#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fkqsd/errors.hpp"
#include "fkqsd/samplers.hpp"
#include "test_stats.hpp"

using namespace fkqsd;
using fkqsd::testing::ks_critical_1pct;
using fkqsd::testing::ks_two_sample;

namespace {

std::vector<std::vector<double>> draw(const LevySpec& spec, double dt, std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<double>> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    RandomStream rng(derive_seed(seed, StreamPurpose::sampler_test, 0, j));
    out[j] = levy_increment(spec, dt, rng);
  }
  return out;
}

/// 20 probe frequencies with |u| in (0, 3], directions spread over the first plane.
std::vector<std::vector<double>> probe_grid(int d) {
  std::vector<std::vector<double>> out;
  for (int f = 0; f < 20; ++f) {
    const double r = 3.0 * (f + 1) / 20.0;
    const double a = f * std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<double> u(static_cast<std::size_t>(d), 0.0);
    u[0] = r * std::cos(a);
    if (d > 1) u[1] = r * std::sin(a);
    out.push_back(u);
  }
  return out;
}

double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

std::vector<LevySpec> all_families(int d) {
  return {
      {LevyFamily::brownian_standard, 2.0, 0.0, d},
      {LevyFamily::isotropic_stable, 1.5, 0.0, d},
      {LevyFamily::isotropic_stable, 0.7, 0.0, d},
      {LevyFamily::isotropic_stable, 2.0, 0.0, d},
      {LevyFamily::relativistic_stable, 1.2, 1.0, d},
      {LevyFamily::variance_gamma, 2.0, 0.0, d},
      {LevyFamily::geometric_stable, 1.5, 0.0, d},
      {LevyFamily::jump_diffusion, 1.0, 0.0, d},
  };
}

}  // namespace

TEST_CASE("gaussian_increment: variance dt and independent coordinates") {
  const std::size_t n = 1000000;
  const double dt = 0.3;
  RandomStream rng(11);
  double s0 = 0.0;
  double s1 = 0.0;
  double s01 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = gaussian_increment(2, dt, rng);
    s0 += g[0] * g[0];
    s1 += g[1] * g[1];
    s01 += g[0] * g[1];
  }
  const double N = static_cast<double>(n);
  CHECK(std::abs(s0 / N / dt - 1.0) < 0.01);
  CHECK(std::abs(s1 / N / dt - 1.0) < 0.01);
  CHECK(std::abs(s01 / N / dt) < 3.0 / std::sqrt(N));
  CHECK_THROWS_AS(gaussian_increment(2, 0.0, rng), ValidationError);
  CHECK_THROWS_AS(gaussian_increment(2, -1.0, rng), ValidationError);
}

TEST_CASE("gaussian_increment: magnitude vanishes with dt") {
  RandomStream rng(12);
  std::size_t small = 0;
  for (int i = 0; i < 10000; ++i) small += norm(gaussian_increment(3, 1e-10, rng)) < 1e-3 ? 1 : 0;
  CHECK(small == 10000);
}

TEST_CASE("positive_stable: beta = 1/2 matches t^2 / (2 Z^2) in law") {
  const std::size_t n = 100000;
  const double t = 0.7;
  std::vector<double> a(n);
  std::vector<double> b(n);
  RandomStream r1(derive_seed(1, StreamPurpose::sampler_test, 1, 0));
  RandomStream r2(derive_seed(1, StreamPurpose::sampler_test, 2, 0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = positive_stable(0.5, t, r1);
    const double z = r2.normal();
    b[i] = t * t / (2.0 * z * z);
    REQUIRE(a[i] > 0.0);
  }
  CHECK(ks_two_sample(a, b) < ks_critical_1pct(n, n));
}

TEST_CASE("positive_stable: Laplace transform exp(-t l^beta)") {
  const std::size_t n = 100000;
  for (double beta : {0.3, 0.5, 0.75}) {
    for (double t : {0.1, 1.0}) {
      RandomStream rng(derive_seed(2, StreamPurpose::sampler_test, 0, static_cast<std::uint64_t>(beta * 100 + t)));
      std::vector<double> s(n);
      for (auto& v : s) v = positive_stable(beta, t, rng);
      for (double l : {0.5, 1.0, 2.0}) {
        double m = 0.0;
        for (double v : s) m += std::exp(-l * v);
        m /= static_cast<double>(n);
        CHECK(std::abs(m - std::exp(-t * std::pow(l, beta))) <= 4.0 / std::sqrt(static_cast<double>(n)));
      }
    }
  }
  RandomStream rng(3);
  CHECK_THROWS_AS(positive_stable(1.0, 1.0, rng), ValidationError);
  CHECK_THROWS_AS(positive_stable(0.5, 0.0, rng), ValidationError);
}

TEST_CASE("isotropic_stable(2): covariance 2 dt, brownian_standard: dt") {
  const std::size_t n = 200000;
  const double dt = 0.1;
  for (auto [family, factor] : {std::pair{LevyFamily::isotropic_stable, 2.0}, {LevyFamily::brownian_standard, 1.0}}) {
    const auto x = draw(LevySpec{family, 2.0, 0.0, 2}, dt, n, 4);
    double s = 0.0;
    for (const auto& v : x) s += v[0] * v[0] + v[1] * v[1];
    CHECK(std::abs(s / (2.0 * static_cast<double>(n)) / (factor * dt) - 1.0) < 0.01);
  }
}

TEST_CASE("characteristic exponents vanish at 0 and are non-negative") {
  for (const auto& spec : all_families(2)) {
    CHECK(characteristic_exponent(spec, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    for (double u = 0.01; u < 100.0; u *= 1.5) CHECK(characteristic_exponent(spec, u) >= 0.0);
  }
  const LevySpec rel{LevyFamily::relativistic_stable, 1.0, 2.0, 2};
  // (|u| + m^2)^(1/2) - m at |u| = 5, m = 2: 3 - 2.
  CHECK(characteristic_exponent(rel, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("property: every family matches exp(-dt Psi) on the probe grid") {
  const std::size_t n = 100000;
  const double bound = 4.0 / std::sqrt(static_cast<double>(n)) + 0.01;
  const auto grid = probe_grid(2);
  std::uint64_t seed = 100;
  for (const auto& spec : all_families(2)) {
    for (double dt : {0.01, 0.1}) {
      const auto x = draw(spec, dt, n, ++seed);
      double sup = 0.0;
      for (const auto& u : grid) {
        const auto phi = empirical_char_function(x, u);
        sup = std::max(sup, std::abs(phi - std::exp(-dt * characteristic_exponent(spec, norm(u)))));
      }
      INFO(to_string(spec.family), " alpha=", spec.alpha, " dt=", dt, " sup=", sup);
      CHECK(sup <= bound);
    }
  }
}

TEST_CASE("isotropic_stable(1.5), dt = 0.1: 20 frequencies within 4/sqrt(N)") {
  const std::size_t n = 100000;
  const LevySpec spec{LevyFamily::isotropic_stable, 1.5, 0.0, 3};
  const auto x = draw(spec, 0.1, n, 77);
  for (const auto& u : probe_grid(3)) {
    const auto phi = empirical_char_function(x, u);
    CHECK(std::abs(phi - std::exp(-0.1 * std::pow(norm(u), 1.5))) <= 4.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("property: isotropy of every family") {
  const std::size_t n = 100000;
  const double N = static_cast<double>(n);
  for (const auto& spec : all_families(2)) {
    const auto x = draw(spec, 0.1, n, 300);
    // Directions are uniform on the circle whatever the tails.
    double m0 = 0.0;
    double m1 = 0.0;
    double c00 = 0.0;
    double c11 = 0.0;
    double c01 = 0.0;
    for (const auto& v : x) {
      const double r = norm(v);
      if (r == 0.0) continue;
      const double a = v[0] / r;
      const double b = v[1] / r;
      m0 += a;
      m1 += b;
      c00 += a * a;
      c11 += b * b;
      c01 += a * b;
    }
    INFO(to_string(spec.family), " alpha=", spec.alpha);
    // Each direction coordinate has variance 1/2.
    CHECK(std::abs(m0 / N) < 4.0 * std::sqrt(0.5 / N));
    CHECK(std::abs(m1 / N) < 4.0 * std::sqrt(0.5 / N));
    CHECK(std::abs(c01 / (0.5 * (c00 + c11))) < 0.05);
    CHECK(std::abs(c00 / c11 - 1.0) < 0.05);
  }
  // Finite-variance families: the raw covariance is proportional to the identity.
  for (const auto& spec : {LevySpec{LevyFamily::brownian_standard, 2.0, 0.0, 2},
                           LevySpec{LevyFamily::variance_gamma, 2.0, 0.0, 2}}) {
    const auto x = draw(spec, 0.1, n, 301);
    double c00 = 0.0;
    double c11 = 0.0;
    double c01 = 0.0;
    for (const auto& v : x) {
      c00 += v[0] * v[0];
      c11 += v[1] * v[1];
      c01 += v[0] * v[1];
    }
    CHECK(std::abs(c01 / (0.5 * (c00 + c11))) < 0.05);
    CHECK(std::abs(c00 / c11 - 1.0) < 0.05);
  }
}

TEST_CASE("property: stable self-similarity under time scaling") {
  const std::size_t n = 50000;
  for (double alpha : {0.8, 1.5}) {
    const LevySpec spec{LevyFamily::isotropic_stable, alpha, 0.0, 2};
    const double c = 4.0;
    const auto a = draw(spec, 0.05, n, 500);
    const auto b = draw(spec, c * 0.05, n, 501);
    std::vector<double> ra;
    std::vector<double> rb;
    for (const auto& v : a) ra.push_back(norm(v));
    for (const auto& v : b) rb.push_back(norm(v) / std::pow(c, 1.0 / alpha));
    CHECK(ks_two_sample(ra, rb) < ks_critical_1pct(n, n));
  }
}

TEST_CASE("jump_diffusion equals the sum of its Gaussian and stable parts in law") {
  const std::size_t n = 50000;
  const double dt = 0.1;
  const auto jd = draw(LevySpec{LevyFamily::jump_diffusion, 1.2, 0.0, 2}, dt, n, 600);
  const auto g = draw(LevySpec{LevyFamily::isotropic_stable, 2.0, 0.0, 2}, dt, n, 601);
  const auto s = draw(LevySpec{LevyFamily::isotropic_stable, 1.2, 0.0, 2}, dt, n, 602);
  std::vector<double> r1;
  std::vector<double> r2;
  for (std::size_t i = 0; i < n; ++i) {
    r1.push_back(norm(jd[i]));
    r2.push_back(std::hypot(g[i][0] + s[i][0], g[i][1] + s[i][1]));
  }
  CHECK(ks_two_sample(r1, r2) < ks_critical_1pct(n, n));
}

TEST_CASE("relativistic rejection cap aborts with a diagnostic") {
  LevySpec spec{LevyFamily::relativistic_stable, 1.0, 1e6, 2};
  spec.max_rejections = 10;
  RandomStream rng(8);
  CHECK_THROWS_AS(levy_increment(spec, 1.0, rng), NonConvergenceError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(LevySpec{LevyFamily::isotropic_stable, 2.5, 0.0, 2}), ValidationError);
  CHECK_THROWS_AS(validate(LevySpec{LevyFamily::relativistic_stable, 1.0, 0.0, 2}), ValidationError);
  CHECK_THROWS_AS(validate(LevySpec{LevyFamily::geometric_stable, 2.0, 0.0, 2}), ValidationError);
  CHECK_THROWS_AS(validate(LevySpec{LevyFamily::isotropic_stable, 1.5, 0.0, 1}), ValidationError);
  CHECK_NOTHROW(validate(LevySpec{LevyFamily::brownian_standard, 2.0, 0.0, 1}));
}

TEST_CASE("empirical_char_function: exact cases") {
  const std::vector<std::vector<double>> zeros(10, std::vector<double>{0.0, 0.0});
  const std::vector<double> u{1.3, -0.4};
  CHECK(empirical_char_function(zeros, u) == std::complex<double>(1.0, 0.0));
  const std::vector<std::vector<double>> pm{{1.0, 2.0}, {-1.0, -2.0}, {1.0, 2.0}, {-1.0, -2.0}};
  const std::vector<double> zero_u{0.0, 0.0};
  CHECK(empirical_char_function(pm, zero_u) == std::complex<double>(1.0, 0.0));
  const std::vector<double> pi_u{std::numbers::pi, 0.0};
  const auto phi = empirical_char_function(pm, pi_u);
  CHECK(phi.real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(phi.imag()) < 1e-15);
  CHECK(std::abs(phi) <= 1.0 + 1e-15);
  const std::vector<std::vector<double>> empty;
  CHECK_THROWS_AS(empirical_char_function(empty, u), ValidationError);
}
