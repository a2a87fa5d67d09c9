#include "fkqsd/geometry.hpp"

#include <cmath>

#include "fkqsd/errors.hpp"

namespace fkqsd {

namespace {

double distance_squared(std::span<const double> x, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - c[i];
    s += d * d;
  }
  return s;
}

void check_size(const std::vector<double>& v, int dimension, const char* what) {
  if (v.size() != static_cast<std::size_t>(dimension))
    throw ValidationError(std::string("domain: ") + what + " has the wrong dimension");
}

}  // namespace

Domain::Domain(DomainSpec spec) : spec_(std::move(spec)) {
  if (spec_.dimension < 1) throw ValidationError("domain: dimension must be >= 1");
  const int d = spec_.dimension;
  if (auto* b = std::get_if<Ball>(&spec_.shape)) {
    check_size(b->center, d, "ball center");
    if (!(b->radius > 0.0)) throw ValidationError("domain: ball radius must be positive");
  } else if (auto* a = std::get_if<Annulus>(&spec_.shape)) {
    if (!(a->r_in >= 0.0 && a->r_out > a->r_in)) throw ValidationError("domain: need 0 <= r_in < r_out");
  } else if (auto* bc = std::get_if<BallComplement>(&spec_.shape)) {
    check_size(bc->center, d, "ball_complement center");
    if (!(bc->radius > 0.0)) throw ValidationError("domain: ball_complement radius must be positive");
  } else if (auto* h = std::get_if<HalfSpace>(&spec_.shape)) {
    check_size(h->normal, d, "halfspace normal");
    double n2 = 0.0;
    for (double v : h->normal) n2 += v * v;
    if (n2 == 0.0) throw ValidationError("domain: halfspace normal must be nonzero");
  }
}

bool Domain::contains_position(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(spec_.dimension))
    throw ValidationError("domain: state dimension does not match the domain");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FullSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return distance_squared(x, s.center) < s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          double r2 = 0.0;
          for (double v : x) r2 += v * v;
          return r2 > s.r_in * s.r_in && r2 < s.r_out * s.r_out;
        } else if constexpr (std::is_same_v<T, BallComplement>) {
          return distance_squared(x, s.center) > s.radius * s.radius;
        } else {
          double dot = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) dot += s.normal[i] * x[i];
          return dot < s.offset;
        }
      },
      spec_.shape);
}

bool contains(const Domain& domain, const PotentialField& potential, std::span<const double> position) {
  if (potential.position_dimension() != domain.dimension())
    throw ValidationError("domain: potential and domain dimensions differ");
  return domain.contains_position(position) && !potential.in_singular_set(position);
}

double singularity_distance(const PotentialField& potential, std::span<const double> position) {
  return potential.singularity_distance(position);
}

}  // namespace fkqsd
