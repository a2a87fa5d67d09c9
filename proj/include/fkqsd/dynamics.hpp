#pragma once

#include <span>
#include <variant>
#include <vector>

#include "fkqsd/random.hpp"
#include "fkqsd/samplers.hpp"

namespace fkqsd {

enum class DriftKind {
  zero,
  linear,          // -kappa x
  gradient_power,  // -grad(c |x|^k / k) = -c |x|^(k-2) x, k >= 2
  double_well,     // -grad(c (|x|^2 - 1)^2 / 4) = -c (|x|^2 - 1) x
};

/// c1: b(x).x/|x| -> -inf; c2: at most linear growth.
enum class GrowthClass { c1, c2, both };

const char* to_string(DriftKind k) noexcept;
const char* to_string(GrowthClass g) noexcept;

[[nodiscard]] inline bool satisfies_c1(GrowthClass g) noexcept { return g != GrowthClass::c2; }
[[nodiscard]] inline bool satisfies_c2(GrowthClass g) noexcept { return g != GrowthClass::c1; }

struct DriftSpec {
  DriftKind kind = DriftKind::zero;
  double kappa = 1.0;        // linear
  double coefficient = 1.0;  // gradient_power, double_well
  double exponent = 4.0;     // gradient_power
};

/// A validated gradient drift b_c = -grad V_c. The growth class is derived
/// from the family, never supplied.
class Drift {
 public:
  explicit Drift(DriftSpec spec);

  [[nodiscard]] const DriftSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] GrowthClass growth_class() const noexcept { return growth_; }

  /// b_c(x) = g(|x|) x; returns the radial factor g.
  [[nodiscard]] double radial_factor(double r) const noexcept;
  void operator()(std::span<const double> x, std::span<double> out) const noexcept;
  [[nodiscard]] std::vector<double> operator()(std::span<const double> x) const;

  /// V_c(x): the primitive of -b_c shifted so that V_c >= 1.
  [[nodiscard]] double potential(std::span<const double> x) const noexcept;
  [[nodiscard]] double radial_potential(double r) const noexcept;

 private:
  DriftSpec spec_;
  GrowthClass growth_ = GrowthClass::c2;
};

std::vector<double> eval_drift(const Drift& drift, std::span<const double> x);

struct OverdampedModel {
  Drift drift;
  int dimension = 2;
};

struct LevyModel {
  LevySpec levy;
};

/// dx = v dt, dv = (-grad V_c(x) - gamma v) dt + dB; -grad V_c is `drift`.
struct KineticModel {
  Drift drift;
  double gamma = 1.0;
  int dimension = 2;
};

/// n independent copies of a Levy process, one per particle block.
struct InteractingModel {
  int n = 2;
  LevySpec levy;
};

using ModelVariant = std::variant<OverdampedModel, LevyModel, KineticModel, InteractingModel>;

struct ModelState {
  std::vector<double> coords;
  friend bool operator==(const ModelState&, const ModelState&) = default;
};

/// Result flags of one step.
struct StepInfo {
  /// |b_c(x)| dt > 1e4: the explicit step is untrustworthy (the state is not altered).
  bool stiff = false;
};

inline constexpr double kStiffThreshold = 1e4;

class ProcessModel {
 public:
  /// Validates the variant (gamma > 0, Levy parameters, dimensions).
  explicit ProcessModel(ModelVariant variant);

  [[nodiscard]] const ModelVariant& variant() const noexcept { return variant_; }
  [[nodiscard]] bool is_kinetic() const noexcept { return std::holds_alternative<KineticModel>(variant_); }

  /// Length of the full state vector.
  [[nodiscard]] int state_dimension() const noexcept;
  /// Length of the position component (the part seen by V and the domain).
  [[nodiscard]] int position_dimension() const noexcept;
  [[nodiscard]] std::span<const double> position(const ModelState& s) const noexcept {
    return std::span<const double>(s.coords).first(static_cast<std::size_t>(position_dimension()));
  }

  /// In-place Euler-Maruyama / Levy step.
  StepInfo advance(ModelState& state, double dt, RandomStream& rng) const;

  /// H(x, v) = V_c(x) + |v|^2 / 2 for the kinetic model.
  [[nodiscard]] double hamiltonian(const ModelState& s) const;

 private:
  ModelVariant variant_;
};

ModelState step(const ProcessModel& model, const ModelState& state, double dt, RandomStream& rng);

}  // namespace fkqsd
