#include "fkqsd/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "fkqsd/errors.hpp"

namespace fkqsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

bool is_origin(std::span<const double> x) noexcept {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

double confining_value(const std::optional<PowerConfining>& c, double r) noexcept {
  if (!c) return 0.0;
  return c->coefficient * std::pow(r, c->exponent);
}

/// Minimum of f over [lo, hi] (log scale): grid scan, then golden section.
double minimize_log_radius(const std::function<double(double)>& f, double lo, double hi) {
  constexpr int kGrid = 4000;
  const double a = std::log(lo);
  const double b = std::log(hi);
  int best = 0;
  double best_value = kInf;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = f(std::exp(a + (b - a) * i / kGrid));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double left = a + (b - a) * std::max(0, best - 1) / kGrid;
  double right = a + (b - a) * std::min(kGrid, best + 1) / kGrid;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - phi * (right - left);
  double x2 = left + phi * (right - left);
  double f1 = f(std::exp(x1));
  double f2 = f(std::exp(x2));
  for (int it = 0; it < 200 && right - left > 1e-14; ++it) {
    if (f1 < f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - phi * (right - left);
      f1 = f(std::exp(x1));
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + phi * (right - left);
      f2 = f(std::exp(x2));
    }
  }
  return std::min({best_value, f1, f2});
}

void validate_profile(const SingularProfile& p, const char* where) {
  std::visit(overloaded{
                 [](std::monostate) {},
                 [&](const Riesz& r) {
                   if (!(r.exponent > 0.0) || !(r.coefficient > 0.0))
                     throw ValidationError(std::string(where) +
                                           ": riesz needs exponent > 0 and coefficient > 0");
                 },
                 [&](const LennardJones& lj) {
                   if (!(lj.well_depth > 0.0) || !(lj.length_scale > 0.0))
                     throw ValidationError(std::string(where) +
                                           ": lennard_jones needs well_depth > 0 and length_scale > 0");
                 },
                 [&](const LogSingular& l) {
                   if (!(l.coefficient > 0.0))
                     throw ValidationError(std::string(where) + ": log_singular needs coefficient > 0");
                 },
                 [&](const LogWithFloor& l) {
                   if (!(l.coefficient > 0.0) || !(l.cutoff > 0.0))
                     throw ValidationError(std::string(where) +
                                           ": log_with_floor needs coefficient > 0 and cutoff > 0");
                 },
             },
             p);
}

}  // namespace

const char* to_string(PotentialClass c) noexcept {
  switch (c) {
    case PotentialClass::S1: return "S1";
    case PotentialClass::S2: return "S2";
    case PotentialClass::Coercive: return "coercive";
    case PotentialClass::Bounded: return "bounded";
    case PotentialClass::Invalid: return "invalid";
  }
  return "invalid";
}

double eval_profile(const SingularProfile& profile, double u) noexcept {
  return std::visit(overloaded{
                        [](std::monostate) { return 0.0; },
                        [u](const Riesz& r) { return r.coefficient * std::pow(u, -r.exponent); },
                        [u](const LennardJones& lj) {
                          const double s6 = std::pow(lj.length_scale / u, 6.0);
                          return 4.0 * lj.well_depth * (s6 * s6 - s6);
                        },
                        [u](const LogSingular& l) { return -l.coefficient * std::log(u); },
                        [u](const LogWithFloor& l) {
                          return -l.coefficient * std::log(std::min(u, l.cutoff));
                        },
                    },
                    profile);
}

double profile_infimum(const SingularProfile& profile) noexcept {
  return std::visit(overloaded{
                        [](std::monostate) { return 0.0; },
                        [](const Riesz&) { return 0.0; },
                        [](const LennardJones& lj) { return -lj.well_depth; },
                        [](const LogSingular&) { return -kInf; },
                        [](const LogWithFloor& l) { return -l.coefficient * std::log(l.cutoff); },
                    },
                    profile);
}

Classification classify(const PotentialSpec& spec) {
  Classification out;
  auto invalid = [&](std::string why) {
    out.kind = PotentialClass::Invalid;
    out.reason = std::move(why);
    return out;
  };
  if (spec.dimension < 1) return invalid("dimension must be >= 1");
  if (!std::isfinite(spec.offset)) return invalid("offset must be finite");
  try {
    validate_profile(spec.singular, "singular");
  } catch (const ValidationError& e) {
    return invalid(e.what());
  }
  if (spec.confining && (!(spec.confining->exponent > 0.0) || !(spec.confining->coefficient > 0.0)))
    return invalid("confining power needs exponent > 0 and coefficient > 0");

  const bool singular = has_singularity(spec.singular);
  if (singular && spec.dimension < 2)
    return invalid("a point singularity is attainable in dimension 1; singular potentials need d >= 2");

  double bound = spec.offset;
  if (const auto* lg = std::get_if<LogSingular>(&spec.singular)) {
    if (!spec.confining) return invalid("log_singular without a confining part is not bounded below");
    // min over r of a r^k - c log r, attained at r^k = c / (a k).
    const double a = spec.confining->coefficient;
    const double k = spec.confining->exponent;
    const double c = lg->coefficient;
    bound += (c / k) * (1.0 - std::log(c / (a * k)));
    // a r^k >= c log r beyond the root of g(r) = a r^k - c log r past its minimiser.
    const double r_star = std::pow(c / (a * k), 1.0 / k);
    auto g = [&](double r) { return a * std::pow(r, k) - c * std::log(r); };
    if (g(r_star) >= 0.0) {
      out.domination_radius = 0.0;
    } else {
      double lo = r_star;
      double hi = std::max(2.0 * r_star, 2.0);
      while (g(hi) < 0.0) hi *= 2.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
      }
      out.domination_radius = hi;
    }
  } else {
    bound += profile_infimum(spec.singular);
  }

  out.lower_bound = bound;
  out.k_s = std::max(0.0, -bound);
  if (singular) {
    out.kind = spec.confining ? PotentialClass::S2 : PotentialClass::S1;
  } else {
    out.kind = spec.confining ? PotentialClass::Coercive : PotentialClass::Bounded;
  }
  return out;
}

SchrodingerPotential::SchrodingerPotential(PotentialSpec spec)
    : spec_(std::move(spec)), class_(classify(spec_)) {
  if (class_.kind == PotentialClass::Invalid) throw ValidationError("potential: " + class_.reason);

  const auto& conf = spec_.confining;
  const auto& sing = spec_.singular;
  if (!has_singularity(sing) || !conf) {
    // Riesz/LJ/log-floor alone: the profile infimum (a limit at infinity for Riesz);
    // confining alone: attained at 0.
    infimum_ = spec_.offset + profile_infimum(sing);
  } else if (const auto* rz = std::get_if<Riesz>(&sing)) {
    const double b = rz->exponent;
    const double c = rz->coefficient;
    const double k = conf->exponent;
    const double a = conf->coefficient;
    const double r = std::pow(c * b / (a * k), 1.0 / (b + k));
    infimum_ = spec_.offset + c * std::pow(r, -b) + a * std::pow(r, k);
  } else if (std::holds_alternative<LogSingular>(sing)) {
    infimum_ = class_.lower_bound;
  } else {
    infimum_ = spec_.offset + minimize_log_radius(
                                  [this](double r) { return radial_without_offset(r).value(); },
                                  1e-6, 1e6);
  }
}

ExtendedReal SchrodingerPotential::radial_without_offset(double r) const noexcept {
  if (has_singularity(spec_.singular)) {
    if (r == 0.0) return ExtendedReal::infinity();
    return ExtendedReal(eval_profile(spec_.singular, r) + confining_value(spec_.confining, r));
  }
  return ExtendedReal(confining_value(spec_.confining, r));
}

ExtendedReal SchrodingerPotential::without_offset(std::span<const double> x) const noexcept {
  if (has_singularity(spec_.singular) && is_origin(x)) return ExtendedReal::infinity();
  return radial_without_offset(norm(x));
}

ExtendedReal SchrodingerPotential::operator()(std::span<const double> x) const noexcept {
  const ExtendedReal v = without_offset(x);
  if (v.is_infinite()) return v;
  return ExtendedReal(v.value() + spec_.offset);
}

bool SchrodingerPotential::in_singular_set(std::span<const double> x) const noexcept {
  return has_singularity(spec_.singular) && is_origin(x);
}

ExtendedReal eval_schrodinger(const SchrodingerPotential& potential, std::span<const double> x) {
  return potential(x);
}

// ---------------------------------------------------------------------------

namespace {

SchrodingerPotential validated_confining(const PotentialSpec& spec, const char* what) {
  if (has_singularity(spec.singular))
    throw ValidationError(std::string(what) + ": confining potential must not have a singular part");
  if (!spec.confining)
    throw ValidationError(std::string(what) + ": V_inf must be coercive (power confining required)");
  return SchrodingerPotential(spec);
}

}  // namespace

InteractionPotential::InteractionPotential(InteractionSpec spec)
    : spec_(std::move(spec)), confining_(validated_confining(spec_.confining, "interaction")) {
  if (spec_.n < 2) throw ValidationError("interaction: need n >= 2 particles");
  if (spec_.confining.dimension < 2) throw ValidationError("interaction: particle dimension must be >= 2");
  if (!has_singularity(spec_.pair) || std::holds_alternative<LogSingular>(spec_.pair))
    throw ValidationError("interaction: pair profile must be riesz, lennard_jones or log_with_floor");
  validate_profile(spec_.pair, "interaction pair");
  pair_lower_bound_ = std::max(0.0, -profile_infimum(spec_.pair));
}

double InteractionPotential::lower_bound() const noexcept {
  const double n = spec_.n;
  return n * confining_.infimum() + 0.5 * n * (n - 1.0) * profile_infimum(spec_.pair);
}

double InteractionPotential::min_pair_distance(std::span<const double> config) const {
  const auto d = static_cast<std::size_t>(spec_.confining.dimension);
  double best = kInf;
  for (int i = 0; i < spec_.n; ++i) {
    for (int j = i + 1; j < spec_.n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = config[i * d + k] - config[j * d + k];
        s += diff * diff;
      }
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

ExtendedReal InteractionPotential::evaluate(std::span<const double> config, bool with_offset) const {
  const auto d = static_cast<std::size_t>(spec_.confining.dimension);
  if (config.size() != d * static_cast<std::size_t>(spec_.n))
    throw ValidationError("interaction: configuration has the wrong length");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(spec_.n * (spec_.n + 1) / 2));
  for (int i = 0; i < spec_.n; ++i) {
    const auto xi = config.subspan(i * d, d);
    terms.push_back(with_offset ? confining_(xi).value() : confining_.without_offset(xi).value());
  }
  for (int i = 0; i < spec_.n; ++i) {
    for (int j = i + 1; j < spec_.n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = config[i * d + k] - config[j * d + k];
        s += diff * diff;
      }
      if (s == 0.0) return ExtendedReal::infinity();
      terms.push_back(eval_profile(spec_.pair, std::sqrt(s)));
    }
  }
  std::sort(terms.begin(), terms.end());
  return ExtendedReal(std::accumulate(terms.begin(), terms.end(), 0.0));
}

ExtendedReal InteractionPotential::operator()(std::span<const double> config) const {
  return evaluate(config, true);
}

ExtendedReal InteractionPotential::without_offset(std::span<const double> config) const {
  return evaluate(config, false);
}

ExtendedReal eval_interaction(const InteractionPotential& potential, std::span<const double> config) {
  return potential(config);
}

// ---------------------------------------------------------------------------

LineChargePotential::LineChargePotential(LineChargeSpec spec) : spec_(std::move(spec)) {
  if (!has_singularity(spec_.radial_profile) || std::holds_alternative<LogSingular>(spec_.radial_profile))
    throw ValidationError("line_charge: radial profile must be riesz, lennard_jones or log_with_floor");
  validate_profile(spec_.radial_profile, "line_charge");
  if (spec_.confining) {
    if (spec_.confining->dimension != 3) throw ValidationError("line_charge: V_inf must live in R^3");
    confining_.emplace(validated_confining(*spec_.confining, "line_charge"));
  }
  lower_bound_ = profile_infimum(spec_.radial_profile) + (confining_ ? confining_->infimum() : 0.0);
  if (!confining_) {
    infimum_ = profile_infimum(spec_.radial_profile);
  } else {
    // V_inf is radial, so the infimum sits on the plane z = 0.
    infimum_ = confining_->offset() +
               minimize_log_radius(
                   [this](double rho) {
                     return eval_profile(spec_.radial_profile, rho) +
                            confining_->radial_without_offset(rho).value();
                   },
                   1e-6, 1e6);
  }
}

double LineChargePotential::axis_distance(std::span<const double> x) noexcept {
  return std::sqrt(x[0] * x[0] + x[1] * x[1]);
}

ExtendedReal LineChargePotential::without_offset(std::span<const double> x) const {
  if (x.size() != 3) throw ValidationError("line_charge: positions must be in R^3");
  if (x[0] == 0.0 && x[1] == 0.0) return ExtendedReal::infinity();
  const double v = eval_profile(spec_.radial_profile, axis_distance(x));
  return ExtendedReal(v + (confining_ ? confining_->without_offset(x).value() : 0.0));
}

ExtendedReal LineChargePotential::operator()(std::span<const double> x) const {
  const ExtendedReal v = without_offset(x);
  if (v.is_infinite()) return v;
  return ExtendedReal(v.value() + offset());
}

// ---------------------------------------------------------------------------

int PotentialField::position_dimension() const noexcept {
  return std::visit(overloaded{
                        [](const SchrodingerPotential& p) { return p.dimension(); },
                        [](const InteractionPotential& p) { return p.particles() * p.particle_dimension(); },
                        [](const LineChargePotential&) { return 3; },
                    },
                    impl_);
}

ExtendedReal PotentialField::operator()(std::span<const double> position) const {
  return std::visit([&](const auto& p) { return p(position); }, impl_);
}

ExtendedReal PotentialField::without_offset(std::span<const double> position) const {
  return std::visit([&](const auto& p) { return p.without_offset(position); }, impl_);
}

double PotentialField::offset() const noexcept {
  return std::visit([](const auto& p) { return p.offset(); }, impl_);
}

double PotentialField::k_s() const noexcept {
  return std::visit(overloaded{
                        [](const SchrodingerPotential& p) { return p.classification().k_s; },
                        [](const InteractionPotential& p) { return std::max(0.0, -p.lower_bound()); },
                        [](const LineChargePotential& p) { return std::max(0.0, -p.lower_bound()); },
                    },
                    impl_);
}

double PotentialField::infimum() const noexcept {
  return std::visit(overloaded{
                        [](const SchrodingerPotential& p) { return p.infimum(); },
                        [](const InteractionPotential& p) { return p.lower_bound(); },
                        [](const LineChargePotential& p) { return p.infimum(); },
                    },
                    impl_);
}

bool PotentialField::is_singular() const noexcept {
  return std::visit(overloaded{
                        [](const SchrodingerPotential& p) { return has_singularity(p.spec().singular); },
                        [](const InteractionPotential&) { return true; },
                        [](const LineChargePotential&) { return true; },
                    },
                    impl_);
}

bool PotentialField::in_singular_set(std::span<const double> position) const {
  return std::visit(overloaded{
                        [&](const SchrodingerPotential& p) { return p.in_singular_set(position); },
                        [&](const InteractionPotential& p) { return p.min_pair_distance(position) == 0.0; },
                        [&](const LineChargePotential&) { return position[0] == 0.0 && position[1] == 0.0; },
                    },
                    impl_);
}

double PotentialField::singularity_distance(std::span<const double> position) const {
  return std::visit(overloaded{
                        [&](const SchrodingerPotential& p) {
                          return has_singularity(p.spec().singular) ? norm(position) : kInf;
                        },
                        [&](const InteractionPotential& p) { return p.min_pair_distance(position); },
                        [&](const LineChargePotential&) { return LineChargePotential::axis_distance(position); },
                    },
                    impl_);
}

PotentialField PotentialField::shifted(double shift) const {
  return std::visit(overloaded{
                        [&](const SchrodingerPotential& p) {
                          PotentialSpec s = p.spec();
                          s.offset += shift;
                          return PotentialField(SchrodingerPotential(s));
                        },
                        [&](const InteractionPotential& p) {
                          InteractionSpec s = p.spec();
                          s.confining.offset += shift / s.n;
                          return PotentialField(InteractionPotential(s));
                        },
                        [&](const LineChargePotential& p) {
                          LineChargeSpec s = p.spec();
                          if (!s.confining) {
                            throw ValidationError("line_charge: shifting requires a V_inf carrying the offset");
                          }
                          s.confining->offset += shift;
                          return PotentialField(LineChargePotential(s));
                        },
                    },
                    impl_);
}

}  // namespace fkqsd
