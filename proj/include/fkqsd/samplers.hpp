#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fkqsd/random.hpp"

namespace fkqsd {

enum class LevyFamily {
  brownian_standard,    // Psi(u) = |u|^2 / 2
  isotropic_stable,     // Psi(u) = |u|^alpha, alpha in (0, 2]
  relativistic_stable,  // Psi(u) = (|u|^alpha + m^(2/alpha))^(alpha/2) - m
  variance_gamma,       // Psi(u) = log(1 + |u|^2)
  geometric_stable,     // Psi(u) = log(1 + |u|^alpha)
  jump_diffusion,       // Psi(u) = |u|^2 + |u|^alpha
};

const char* to_string(LevyFamily f) noexcept;

struct LevySpec {
  LevyFamily family = LevyFamily::brownian_standard;
  double alpha = 2.0;
  double mass = 0.0;
  int dimension = 2;
  /// Cap on rejection rounds for the relativistic sampler.
  std::size_t max_rejections = 1'000'000;
};

/// Throws ValidationError on out-of-range parameters.
void validate(const LevySpec& spec);

/// Psi(u) for the rotation-invariant families; depends on |u| only and is real.
double characteristic_exponent(const LevySpec& spec, double u_norm);

/// d i.i.d. N(0, dt) coordinates.
std::vector<double> gaussian_increment(int d, double dt, RandomStream& rng);

/// One-sided stable draw with E exp(-l S) = exp(-t l^beta), beta in (0, 1),
/// by the Chambers-Mallows-Stuck (Kanter) representation.
double positive_stable(double beta, double t, RandomStream& rng);

/// Writes into `out` (size = spec.dimension) a draw whose characteristic
/// function is exp(-dt Psi(u)).
void levy_increment(const LevySpec& spec, double dt, RandomStream& rng, std::span<double> out);

std::vector<double> levy_increment(const LevySpec& spec, double dt, RandomStream& rng);

/// (1/N) sum_j exp(i u . x_j)
std::complex<double> empirical_char_function(std::span<const std::vector<double>> samples,
                                             std::span<const double> u);

}  // namespace fkqsd
