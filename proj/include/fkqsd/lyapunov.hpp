#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fkqsd/dynamics.hpp"
#include "fkqsd/fk_engine.hpp"

namespace fkqsd {

/// W = exp(eps L), L = |x| (1 - chi).
struct ExpRadialW {
  double epsilon = 0.1;
};
/// W = |x|^k (1 - chi) + 1, k > 2.
struct PowerRadialW {
  double exponent = 4.0;
};
/// W = exp(F - inf F), F = a H + b v.G(x), G = (x/|x|)(1 - chi).
struct KineticW {
  double a = 1.0;
  double b = 0.2;
  double gamma = 1.0;
};
struct UnitW {};

using LyapunovVariant = std::variant<ExpRadialW, PowerRadialW, KineticW, UnitW>;

/// Throws ValidationError outside the admissible parameters
/// (kinetic: 0 < a < 2 gamma and 0 < b < a (gamma - a/2)).
class LyapunovSpec {
 public:
  explicit LyapunovSpec(LyapunovVariant v);
  [[nodiscard]] const LyapunovVariant& variant() const noexcept { return v_; }
  [[nodiscard]] const char* name() const noexcept;

 private:
  LyapunovVariant v_;
};

/// chi = 1 - smoothstep(2(|x| - 1/2)) on [1/2, 1], 1 inside, 0 outside.
double cutoff_chi(double r) noexcept;

/// Generator ratio (L W)/W for the overdamped model with unit noise. Throws at x = 0.
double gen_oL_ratio(std::span<const double> x, const LyapunovSpec& spec, const Drift& drift);

/// Generator ratio for kinetic Langevin, with drift = -grad V_c. Throws at x = 0.
double gen_kL_ratio(std::span<const double> x, std::span<const double> v, const KineticW& spec, const Drift& drift);

/// inf over (x, v) of F = a H + b v.G (attained at v = -b G / a; radial 1-d search in x).
double kinetic_inf_F(const KineticW& spec, const Drift& drift);

/// W at a full model state (for the kinetic spec, W includes the exp(-inf F) factor).
double lyapunov_value(const LyapunovSpec& spec, const ProcessModel& process, const ModelState& s);

/// (L W)/W at a state; Levy and interacting models accept the unit W only (ratio 0).
double generator_ratio(const LyapunovSpec& spec, const ProcessModel& process, const ModelState& s);

struct ScanPoint {
  double coordinate = 0.0;
  ModelState state;
};

/// States ordered along a curve; each flagged end is expected to carry r -> -inf.
struct ScanCurve {
  std::string name;
  std::vector<ScanPoint> points;
  bool check_low_end = true;
  bool check_high_end = true;
};

std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Curves through the state space of the model toward its singular set and toward infinity:
/// point models scan x = r e1; kinetic adds velocity and diagonal curves; the
/// interacting model scans pair separation and a rigid translation; the line charge
/// scans axis distance and a translation along the axis.
std::vector<ScanCurve> default_scan_curves(const FeynmanKacModel& model, double lo = 1e-3, double hi = 1e3,
                                           std::size_t n = 121);

struct ScanOptions {
  /// Endpoint values must fall below -threshold.
  double threshold = 100.0;
  /// Level defining the set {r > -r0} reported for compactness.
  double r0 = 1.0;
  /// Coordinates outside [core_low, core_high] count as "outside the central annulus".
  double core_low = 0.1;
  double core_high = 10.0;
  std::size_t tail = 5;
};

struct ScanRow {
  std::string curve;
  double coordinate = 0.0;
  double p = 0.0;
  double ratio = 0.0;
  /// ratio - p V.
  double value = 0.0;
};

struct ScanSummary {
  std::string curve;
  double p = 0.0;
  double low_end = 0.0;
  double high_end = 0.0;
  bool low_below = true;
  bool high_below = true;
  bool low_monotone = true;
  bool high_monotone = true;
  /// Largest r outside the central annulus.
  double max_outside_core = 0.0;
  /// max over the curve of (L W)/W - V: the constant in (L - V) W <= m0 W.
  double m0 = 0.0;
  /// {r > -r0} stays away from the checked curve ends.
  bool level_set_compact = true;
  bool passed = true;
};

struct LyapunovReport {
  std::string spec_name;
  std::vector<ScanRow> rows;
  std::vector<ScanSummary> summaries;
  [[nodiscard]] bool passed() const noexcept;
};

/// Tabulates r = (L W)/W - p V for every p along every curve. Throws if a scan
/// point lies on the singular set.
LyapunovReport drift_scan(const FeynmanKacModel& model, const LyapunovSpec& spec, std::span<const double> p_list,
                          std::span<const ScanCurve> curves, const ScanOptions& options = {});

struct FdCheck {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double abs_error = 0.0;
  /// abs_error / max(|analytic|, W).
  double rel_error = 0.0;
};

/// Central-difference evaluation of L W at `s` against ratio * W.
/// Only the overdamped and kinetic models have a local generator here.
FdCheck fd_generator_check(const LyapunovSpec& spec, const ProcessModel& process, const ModelState& s, double h);

}  // namespace fkqsd
