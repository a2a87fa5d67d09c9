#include "fkqsd/samplers.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fkqsd/errors.hpp"

namespace fkqsd {

const char* to_string(LevyFamily f) noexcept {
  switch (f) {
    case LevyFamily::brownian_standard: return "brownian_standard";
    case LevyFamily::isotropic_stable: return "isotropic_stable";
    case LevyFamily::relativistic_stable: return "relativistic_stable";
    case LevyFamily::variance_gamma: return "variance_gamma";
    case LevyFamily::geometric_stable: return "geometric_stable";
    case LevyFamily::jump_diffusion: return "jump_diffusion";
  }
  return "unknown";
}

void validate(const LevySpec& spec) {
  const auto name = std::string(to_string(spec.family));
  if (spec.family == LevyFamily::brownian_standard) {
    if (spec.dimension < 1) throw ValidationError("levy: dimension must be >= 1");
    return;
  }
  if (spec.dimension < 2) throw ValidationError("levy: " + name + " needs dimension >= 2");
  switch (spec.family) {
    case LevyFamily::isotropic_stable:
      if (!(spec.alpha > 0.0 && spec.alpha <= 2.0))
        throw ValidationError("levy: isotropic_stable needs alpha in (0, 2]");
      break;
    case LevyFamily::relativistic_stable:
      if (!(spec.alpha > 0.0 && spec.alpha < 2.0))
        throw ValidationError("levy: relativistic_stable needs alpha in (0, 2)");
      if (!(spec.mass > 0.0)) throw ValidationError("levy: relativistic_stable needs m > 0");
      if (spec.max_rejections == 0) throw ValidationError("levy: max_rejections must be positive");
      break;
    case LevyFamily::geometric_stable:
    case LevyFamily::jump_diffusion:
      if (!(spec.alpha > 0.0 && spec.alpha < 2.0))
        throw ValidationError("levy: " + name + " needs alpha in (0, 2)");
      break;
    default:
      break;
  }
}

double characteristic_exponent(const LevySpec& spec, double u) {
  switch (spec.family) {
    case LevyFamily::brownian_standard: return 0.5 * u * u;
    case LevyFamily::isotropic_stable: return std::pow(u, spec.alpha);
    case LevyFamily::relativistic_stable:
      return std::pow(std::pow(u, spec.alpha) + std::pow(spec.mass, 2.0 / spec.alpha), spec.alpha / 2.0) -
             spec.mass;
    case LevyFamily::variance_gamma: return std::log1p(u * u);
    case LevyFamily::geometric_stable: return std::log1p(std::pow(u, spec.alpha));
    case LevyFamily::jump_diffusion: return u * u + std::pow(u, spec.alpha);
  }
  return 0.0;
}

std::vector<double> gaussian_increment(int d, double dt, RandomStream& rng) {
  if (!(dt > 0.0)) throw ValidationError("gaussian_increment: dt must be positive");
  std::vector<double> out(static_cast<std::size_t>(d));
  const double s = std::sqrt(dt);
  for (double& v : out) v = s * rng.normal();
  return out;
}

double positive_stable(double beta, double t, RandomStream& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("positive_stable: beta must lie in (0, 1)");
  if (!(t > 0.0)) throw ValidationError("positive_stable: t must be positive");
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  const double a = std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta);
  const double b = std::pow(std::sin((1.0 - beta) * u) / e, (1.0 - beta) / beta);
  const double s = std::pow(t, 1.0 / beta) * a * b;
  // Underflow in the tails must not leave a zero draw.
  return s > 0.0 ? s : std::numeric_limits<double>::min();
}

namespace {

/// sqrt(2 S) Z: exponent |u|^2 composed with the Laplace exponent of S.
void subordinated_gaussian(double s, RandomStream& rng, std::span<double> out) {
  const double scale = std::sqrt(2.0 * s);
  for (double& v : out) v = scale * rng.normal();
}

/// Isotropic alpha-stable step over (possibly random) time t.
void stable_step(double alpha, double t, RandomStream& rng, std::span<double> out) {
  if (t <= 0.0) {
    for (double& v : out) v = 0.0;
    return;
  }
  if (alpha == 2.0) {
    subordinated_gaussian(t, rng, out);
    return;
  }
  subordinated_gaussian(positive_stable(alpha / 2.0, t, rng), rng, out);
}

/// Exponentially tilted alpha/2-stable subordinator at time dt:
/// Laplace exponent (l + m^(2/alpha))^(alpha/2) - m, by rejection.
double tilted_subordinator(const LevySpec& spec, double dt, RandomStream& rng) {
  const double tilt = std::pow(spec.mass, 2.0 / spec.alpha);
  for (std::size_t round = 0; round < spec.max_rejections; ++round) {
    const double s = positive_stable(spec.alpha / 2.0, dt, rng);
    if (rng.uniform() <= std::exp(-tilt * s)) return s;
  }
  throw NonConvergenceError("relativistic_stable: rejection cap of " + std::to_string(spec.max_rejections) +
                            " reached; expected acceptance is exp(-m dt), reduce dt relative to 1/m");
}

}  // namespace

void levy_increment(const LevySpec& spec, double dt, RandomStream& rng, std::span<double> out) {
  if (!(dt > 0.0)) throw ValidationError("levy_increment: dt must be positive");
  if (out.size() != static_cast<std::size_t>(spec.dimension))
    throw ValidationError("levy_increment: output size does not match the dimension");
  switch (spec.family) {
    case LevyFamily::brownian_standard: {
      const double s = std::sqrt(dt);
      for (double& v : out) v = s * rng.normal();
      return;
    }
    case LevyFamily::isotropic_stable:
      stable_step(spec.alpha, dt, rng, out);
      return;
    case LevyFamily::relativistic_stable:
      // The tilted subordinator is used as a random clock for an alpha-stable step,
      // giving exp(-dt [(|u|^alpha + m^(2/alpha))^(alpha/2) - m]).
      stable_step(spec.alpha, tilted_subordinator(spec, dt, rng), rng, out);
      return;
    case LevyFamily::variance_gamma:
      subordinated_gaussian(rng.gamma(dt), rng, out);
      return;
    case LevyFamily::geometric_stable:
      stable_step(spec.alpha, rng.gamma(dt), rng, out);
      return;
    case LevyFamily::jump_diffusion: {
      stable_step(spec.alpha, dt, rng, out);
      const double s = std::sqrt(2.0 * dt);
      for (double& v : out) v += s * rng.normal();
      return;
    }
  }
}

std::vector<double> levy_increment(const LevySpec& spec, double dt, RandomStream& rng) {
  std::vector<double> out(static_cast<std::size_t>(spec.dimension));
  levy_increment(spec, dt, rng, out);
  return out;
}

std::complex<double> empirical_char_function(std::span<const std::vector<double>> samples,
                                             std::span<const double> u) {
  if (samples.empty()) throw ValidationError("empirical_char_function: no samples");
  double re = 0.0;
  double im = 0.0;
  for (const auto& x : samples) {
    if (x.size() != u.size()) throw ValidationError("empirical_char_function: dimension mismatch");
    double phase = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) phase += u[k] * x[k];
    re += std::cos(phase);
    im += std::sin(phase);
  }
  const auto n = static_cast<double>(samples.size());
  return {re / n, im / n};
}

}  // namespace fkqsd
