#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fkqsd/extended_real.hpp"

namespace fkqsd {

// Radial singular profiles u -> v(u), u > 0.

/// c * u^(-b)
struct Riesz {
  double exponent = 1.0;
  double coefficient = 1.0;
};
/// 4 eps ((s/u)^12 - (s/u)^6); minimum -eps at u = 2^(1/6) s.
struct LennardJones {
  double well_depth = 1.0;
  double length_scale = 1.0;
};
/// -c log u. Not bounded below on its own.
struct LogSingular {
  double coefficient = 1.0;
};
/// -c log(min(u, cutoff)): the line-charge profile, flat beyond the cutoff.
struct LogWithFloor {
  double coefficient = 1.0;
  double cutoff = 1.0;
};

using SingularProfile = std::variant<std::monostate, Riesz, LennardJones, LogSingular, LogWithFloor>;

/// coefficient * r^exponent
struct PowerConfining {
  double exponent = 2.0;
  double coefficient = 1.0;
};

struct PotentialSpec {
  SingularProfile singular;
  std::optional<PowerConfining> confining;
  double offset = 0.0;
  int dimension = 2;
};

/// S1/S2 are the singular classes; Coercive is a non-singular confining
/// potential J_S; Bounded covers constants.
enum class PotentialClass { S1, S2, Coercive, Bounded, Invalid };

const char* to_string(PotentialClass c) noexcept;

struct Classification {
  PotentialClass kind = PotentialClass::Invalid;
  /// k_S >= 0 with V >= -k_S everywhere.
  double k_s = 0.0;
  /// The closed-form lower bound itself (>= -k_s).
  double lower_bound = 0.0;
  /// For a log singularity: radius beyond which the confining part dominates c log r.
  double domination_radius = 0.0;
  std::string reason;
};

Classification classify(const PotentialSpec& spec);

/// v(u) for u > 0; the monostate profile is identically 0.
double eval_profile(const SingularProfile& profile, double u) noexcept;

/// Infimum of the profile over (0, inf); -inf for a bare log singularity.
double profile_infimum(const SingularProfile& profile) noexcept;

[[nodiscard]] inline bool has_singularity(const SingularProfile& p) noexcept {
  return !std::holds_alternative<std::monostate>(p);
}

/// A validated point-singular (or non-singular) Schrodinger potential on R^d.
class SchrodingerPotential {
 public:
  /// Throws ValidationError when classify() reports Invalid.
  explicit SchrodingerPotential(PotentialSpec spec);

  [[nodiscard]] const PotentialSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const Classification& classification() const noexcept { return class_; }
  [[nodiscard]] int dimension() const noexcept { return spec_.dimension; }
  [[nodiscard]] double offset() const noexcept { return spec_.offset; }

  /// V(x); the singular sentinel exactly at x = 0 when a singular part is present.
  [[nodiscard]] ExtendedReal operator()(std::span<const double> x) const noexcept;
  /// V(x) - offset, computed without ever adding the offset.
  [[nodiscard]] ExtendedReal without_offset(std::span<const double> x) const noexcept;
  /// Same as without_offset() but for a known radius |x|.
  [[nodiscard]] ExtendedReal radial_without_offset(double r) const noexcept;

  [[nodiscard]] bool in_singular_set(std::span<const double> x) const noexcept;
  /// inf over the punctured space (closed form or a refined 1-D search).
  [[nodiscard]] double infimum() const noexcept { return infimum_; }

 private:
  PotentialSpec spec_;
  Classification class_;
  double infimum_ = 0.0;
};

ExtendedReal eval_schrodinger(const SchrodingerPotential& potential, std::span<const double> x);

/// U_S(x_1..x_n) = sum_i V_inf(x_i) + sum_{i<j} v_S(|x_i - x_j|).
struct InteractionSpec {
  int n = 2;
  /// V_inf: no singular part, power confining required (coercive).
  PotentialSpec confining;
  /// v_S: Riesz, Lennard-Jones or log-with-floor.
  SingularProfile pair;
};

class InteractionPotential {
 public:
  explicit InteractionPotential(InteractionSpec spec);

  [[nodiscard]] const InteractionSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] int particles() const noexcept { return spec_.n; }
  [[nodiscard]] int particle_dimension() const noexcept { return spec_.confining.dimension; }
  /// k_S of the pair profile.
  [[nodiscard]] double pair_lower_bound() const noexcept { return pair_lower_bound_; }
  /// n * inf V_inf + n(n-1)/2 * inf v_S (a lower bound for inf U_S).
  [[nodiscard]] double lower_bound() const noexcept;
  [[nodiscard]] double offset() const noexcept { return spec_.n * spec_.confining.offset; }

  /// Permutation invariant exactly: the summands are sorted before summation.
  [[nodiscard]] ExtendedReal operator()(std::span<const double> config) const;
  [[nodiscard]] ExtendedReal without_offset(std::span<const double> config) const;
  [[nodiscard]] double min_pair_distance(std::span<const double> config) const;

 private:
  ExtendedReal evaluate(std::span<const double> config, bool with_offset) const;

  InteractionSpec spec_;
  SchrodingerPotential confining_;
  double pair_lower_bound_ = 0.0;
};

ExtendedReal eval_interaction(const InteractionPotential& potential, std::span<const double> config);

/// C_S(x) = v_S(dist(x, axis)) + V_inf(x) in R^3, the axis being {(0,0,t)}.
struct LineChargeSpec {
  SingularProfile radial_profile;
  /// Optional V_inf on R^3 (no singular part).
  std::optional<PotentialSpec> confining;
};

class LineChargePotential {
 public:
  explicit LineChargePotential(LineChargeSpec spec);

  [[nodiscard]] const LineChargeSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] double offset() const noexcept {
    return spec_.confining ? spec_.confining->offset : 0.0;
  }
  [[nodiscard]] double lower_bound() const noexcept { return lower_bound_; }
  /// inf over R^3 minus the axis, by a 1-D search in the axial distance (z = 0).
  [[nodiscard]] double infimum() const noexcept { return infimum_; }

  [[nodiscard]] ExtendedReal operator()(std::span<const double> x) const;
  [[nodiscard]] ExtendedReal without_offset(std::span<const double> x) const;
  [[nodiscard]] static double axis_distance(std::span<const double> x) noexcept;

 private:
  LineChargeSpec spec_;
  std::optional<SchrodingerPotential> confining_;
  double lower_bound_ = 0.0;
  double infimum_ = 0.0;
};

/// The potential driving the Feynman-Kac weight, whatever its singular set.
class PotentialField {
 public:
  using Variant = std::variant<SchrodingerPotential, InteractionPotential, LineChargePotential>;

  PotentialField(SchrodingerPotential p) : impl_(std::move(p)) {}   // NOLINT
  PotentialField(InteractionPotential p) : impl_(std::move(p)) {}   // NOLINT
  PotentialField(LineChargePotential p) : impl_(std::move(p)) {}    // NOLINT

  [[nodiscard]] const Variant& variant() const noexcept { return impl_; }

  /// Length of the position vector the potential acts on.
  [[nodiscard]] int position_dimension() const noexcept;
  [[nodiscard]] ExtendedReal operator()(std::span<const double> position) const;
  [[nodiscard]] ExtendedReal without_offset(std::span<const double> position) const;
  [[nodiscard]] double offset() const noexcept;
  /// k_S: V >= -k_S everywhere.
  [[nodiscard]] double k_s() const noexcept;
  /// Infimum of V (for the interacting potential, the documented lower bound).
  [[nodiscard]] double infimum() const noexcept;
  [[nodiscard]] bool is_singular() const noexcept;
  [[nodiscard]] bool in_singular_set(std::span<const double> position) const;
  /// |x|, min pairwise distance, or distance to the axis; +inf without a singular set.
  [[nodiscard]] double singularity_distance(std::span<const double> position) const;
  /// Returns a copy whose constant offset is increased by `shift`.
  [[nodiscard]] PotentialField shifted(double shift) const;

 private:
  Variant impl_;
};

}  // namespace fkqsd
