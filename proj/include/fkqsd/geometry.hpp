#pragma once

#include <span>
#include <variant>
#include <vector>

#include "fkqsd/potentials.hpp"

namespace fkqsd {

/// No killing: the whole state space minus the singular set.
struct FullSpace {};
struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};
/// Centred at the origin: r_in < |x| < r_out.
struct Annulus {
  double r_in = 0.0;
  double r_out = 1.0;
};
struct BallComplement {
  std::vector<double> center;
  double radius = 1.0;
};
/// {x : normal . x < offset}
struct HalfSpace {
  std::vector<double> normal;
  double offset = 0.0;
};

using DomainShape = std::variant<FullSpace, Ball, Annulus, BallComplement, HalfSpace>;

/// An open killing domain in position space. For the interacting model the
/// position space is (R^d)^n and `dimension` is n*d.
struct DomainSpec {
  DomainShape shape;
  int dimension = 2;
};

class Domain {
 public:
  /// Throws ValidationError on inconsistent sizes or radii.
  explicit Domain(DomainSpec spec);

  [[nodiscard]] const DomainSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] int dimension() const noexcept { return spec_.dimension; }
  [[nodiscard]] bool is_full() const noexcept { return std::holds_alternative<FullSpace>(spec_.shape); }

  /// Membership in the open shape alone (boundary points are outside).
  [[nodiscard]] bool contains_position(std::span<const double> position) const;

 private:
  DomainSpec spec_;
};

/// Membership of a position, excluding the potential's singular set.
/// Throws ValidationError on a dimension mismatch.
bool contains(const Domain& domain, const PotentialField& potential, std::span<const double> position);

/// |x|, the minimum pairwise distance, or the distance to the axis.
double singularity_distance(const PotentialField& potential, std::span<const double> position);

}  // namespace fkqsd
