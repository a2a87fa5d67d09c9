#include "fkqsd/dynamics.hpp"

#include <cmath>
#include <string>

#include "fkqsd/errors.hpp"

namespace fkqsd {

const char* to_string(DriftKind k) noexcept {
  switch (k) {
    case DriftKind::zero: return "zero";
    case DriftKind::linear: return "linear";
    case DriftKind::gradient_power: return "gradient_power";
    case DriftKind::double_well: return "double_well";
  }
  return "unknown";
}

const char* to_string(GrowthClass g) noexcept {
  switch (g) {
    case GrowthClass::c1: return "c1";
    case GrowthClass::c2: return "c2";
    case GrowthClass::both: return "both";
  }
  return "unknown";
}

Drift::Drift(DriftSpec spec) : spec_(spec) {
  switch (spec_.kind) {
    case DriftKind::zero:
      growth_ = GrowthClass::c2;
      break;
    case DriftKind::linear:
      if (!(spec_.kappa >= 0.0)) throw ValidationError("drift: linear needs kappa >= 0");
      growth_ = spec_.kappa > 0.0 ? GrowthClass::both : GrowthClass::c2;
      break;
    case DriftKind::gradient_power:
      if (!(spec_.coefficient > 0.0)) throw ValidationError("drift: gradient_power needs coefficient > 0");
      if (!(spec_.exponent >= 2.0))
        throw ValidationError("drift: gradient_power needs exponent >= 2 (locally Lipschitz)");
      growth_ = spec_.exponent > 2.0 ? GrowthClass::c1 : GrowthClass::both;
      break;
    case DriftKind::double_well:
      if (!(spec_.coefficient > 0.0)) throw ValidationError("drift: double_well needs coefficient > 0");
      growth_ = GrowthClass::c1;
      break;
  }
}

double Drift::radial_factor(double r) const noexcept {
  switch (spec_.kind) {
    case DriftKind::zero: return 0.0;
    case DriftKind::linear: return -spec_.kappa;
    case DriftKind::gradient_power:
      return spec_.exponent == 2.0 ? -spec_.coefficient
                                   : -spec_.coefficient * std::pow(r, spec_.exponent - 2.0);
    case DriftKind::double_well: return -spec_.coefficient * (r * r - 1.0);
  }
  return 0.0;
}

void Drift::operator()(std::span<const double> x, std::span<double> out) const noexcept {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double g = radial_factor(std::sqrt(r2));
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = g * x[i];
}

std::vector<double> Drift::operator()(std::span<const double> x) const {
  std::vector<double> out(x.size());
  (*this)(x, out);
  return out;
}

double Drift::radial_potential(double r) const noexcept {
  switch (spec_.kind) {
    case DriftKind::zero: return 1.0;
    case DriftKind::linear: return 1.0 + 0.5 * spec_.kappa * r * r;
    case DriftKind::gradient_power:
      return 1.0 + spec_.coefficient * std::pow(r, spec_.exponent) / spec_.exponent;
    case DriftKind::double_well: {
      const double w = r * r - 1.0;
      return 1.0 + 0.25 * spec_.coefficient * w * w;
    }
  }
  return 1.0;
}

double Drift::potential(std::span<const double> x) const noexcept {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return radial_potential(std::sqrt(r2));
}

std::vector<double> eval_drift(const Drift& drift, std::span<const double> x) { return drift(x); }

// ---------------------------------------------------------------------------

ProcessModel::ProcessModel(ModelVariant variant) : variant_(std::move(variant)) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OverdampedModel>) {
          if (m.dimension < 1) throw ValidationError("overdamped: dimension must be >= 1");
        } else if constexpr (std::is_same_v<T, LevyModel>) {
          validate(m.levy);
        } else if constexpr (std::is_same_v<T, KineticModel>) {
          if (!(m.gamma > 0.0)) throw ValidationError("kinetic: gamma must be positive");
          if (m.dimension < 1) throw ValidationError("kinetic: dimension must be >= 1");
        } else {
          if (m.n < 2) throw ValidationError("interacting: need n >= 2 particles");
          validate(m.levy);
        }
      },
      variant_);
}

int ProcessModel::state_dimension() const noexcept {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OverdampedModel>) return m.dimension;
        else if constexpr (std::is_same_v<T, LevyModel>) return m.levy.dimension;
        else if constexpr (std::is_same_v<T, KineticModel>) return 2 * m.dimension;
        else return m.n * m.levy.dimension;
      },
      variant_);
}

int ProcessModel::position_dimension() const noexcept {
  if (const auto* k = std::get_if<KineticModel>(&variant_)) return k->dimension;
  return state_dimension();
}

StepInfo ProcessModel::advance(ModelState& state, double dt, RandomStream& rng) const {
  if (!(dt > 0.0)) throw ValidationError("step: dt must be positive");
  if (state.coords.size() != static_cast<std::size_t>(state_dimension()))
    throw ValidationError("step: state dimension does not match the model");
  for (double v : state.coords) {
    if (!std::isfinite(v)) throw std::domain_error("step: non-finite state");
  }
  StepInfo info;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        auto& x = state.coords;
        if constexpr (std::is_same_v<T, OverdampedModel>) {
          double r2 = 0.0;
          for (double v : x) r2 += v * v;
          const double r = std::sqrt(r2);
          const double g = m.drift.radial_factor(r);
          info.stiff = std::abs(g) * r * dt > kStiffThreshold;
          const double s = std::sqrt(dt);
          for (double& v : x) v += g * v * dt + s * rng.normal();
        } else if constexpr (std::is_same_v<T, LevyModel>) {
          double inc[16];
          std::vector<double> heap;
          std::span<double> buf;
          const auto d = static_cast<std::size_t>(m.levy.dimension);
          if (d <= 16) {
            buf = std::span<double>(inc, d);
          } else {
            heap.resize(d);
            buf = heap;
          }
          levy_increment(m.levy, dt, rng, buf);
          for (std::size_t i = 0; i < d; ++i) x[i] += buf[i];
        } else if constexpr (std::is_same_v<T, KineticModel>) {
          const auto d = static_cast<std::size_t>(m.dimension);
          double r2 = 0.0;
          for (std::size_t i = 0; i < d; ++i) r2 += x[i] * x[i];
          const double r = std::sqrt(r2);
          const double g = m.drift.radial_factor(r);
          info.stiff = std::abs(g) * r * dt > kStiffThreshold;
          const double s = std::sqrt(dt);
          for (std::size_t i = 0; i < d; ++i) {
            const double xi = x[i];
            const double vi = x[d + i];
            x[i] = xi + vi * dt;
            x[d + i] = vi + (g * xi - m.gamma * vi) * dt + s * rng.normal();
          }
        } else {
          const auto d = static_cast<std::size_t>(m.levy.dimension);
          std::vector<double> buf(d);
          for (int p = 0; p < m.n; ++p) {
            levy_increment(m.levy, dt, rng, buf);
            for (std::size_t i = 0; i < d; ++i) x[p * d + i] += buf[i];
          }
        }
      },
      variant_);
  return info;
}

double ProcessModel::hamiltonian(const ModelState& s) const {
  const auto* k = std::get_if<KineticModel>(&variant_);
  if (k == nullptr) throw ValidationError("hamiltonian: only defined for the kinetic model");
  const auto d = static_cast<std::size_t>(k->dimension);
  const auto x = std::span<const double>(s.coords).first(d);
  double v2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) v2 += s.coords[d + i] * s.coords[d + i];
  return k->drift.potential(x) + 0.5 * v2;
}

ModelState step(const ProcessModel& model, const ModelState& state, double dt, RandomStream& rng) {
  ModelState next = state;
  model.advance(next, dt, rng);
  return next;
}

}  // namespace fkqsd
