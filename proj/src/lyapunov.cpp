#include "fkqsd/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "fkqsd/errors.hpp"

namespace fkqsd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// S(r) = 1 - chi(r) and its first two r-derivatives.
struct Smooth {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
};

Smooth one_minus_chi(double r) {
  if (r <= 0.5) return {};
  if (r >= 1.0) return {1.0, 0.0, 0.0};
  const double s = 2.0 * (r - 0.5);
  const double p = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  const double dp = 30.0 * s * s * (1.0 - s) * (1.0 - s);
  const double ddp = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  return {p, 2.0 * dp, 4.0 * ddp};
}

/// A radial function f(|x|) with f', f''.
struct Radial {
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

/// L(r) = r S(r).
Radial radial_L(double r) {
  const Smooth s = one_minus_chi(r);
  return {r * s.s0, s.s0 + r * s.s1, 2.0 * s.s1 + r * s.s2};
}

/// l(r) = r^k S(r).
Radial radial_power(double r, double k) {
  const Smooth s = one_minus_chi(r);
  const double rk = std::pow(r, k);
  const double rk1 = k * std::pow(r, k - 1.0);
  const double rk2 = k * (k - 1.0) * std::pow(r, k - 2.0);
  return {rk * s.s0, rk1 * s.s0 + rk * s.s1, rk2 * s.s0 + 2.0 * rk1 * s.s1 + rk * s.s2};
}

const KineticModel& kinetic_of(const ProcessModel& process) {
  const auto* k = std::get_if<KineticModel>(&process.variant());
  if (k == nullptr) throw ValidationError("lyapunov: the kinetic W needs the kinetic model");
  return *k;
}

}  // namespace

LyapunovSpec::LyapunovSpec(LyapunovVariant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [](const ExpRadialW& w) {
                   if (!(w.epsilon > 0.0) || !std::isfinite(w.epsilon))
                     throw ValidationError("lyapunov: exp_radial needs epsilon > 0");
                 },
                 [](const PowerRadialW& w) {
                   if (!(w.exponent > 2.0) || !std::isfinite(w.exponent))
                     throw ValidationError("lyapunov: power_radial needs k > 2");
                 },
                 [](const KineticW& w) {
                   if (!(w.gamma > 0.0)) throw ValidationError("lyapunov: kinetic needs gamma > 0");
                   if (!(w.a > 0.0) || !(w.a < 2.0 * w.gamma))
                     throw ValidationError("lyapunov: kinetic needs 0 < a < 2 gamma");
                   if (!(w.b > 0.0) || !(w.b < w.a * (w.gamma - w.a / 2.0)))
                     throw ValidationError("lyapunov: kinetic needs 0 < b < a (gamma - a/2)");
                 },
                 [](const UnitW&) {},
             },
             v_);
}

const char* LyapunovSpec::name() const noexcept {
  return std::visit(overloaded{
                        [](const ExpRadialW&) { return "exp_radial"; },
                        [](const PowerRadialW&) { return "power_radial"; },
                        [](const KineticW&) { return "kinetic"; },
                        [](const UnitW&) { return "unit"; },
                    },
                    v_);
}

double cutoff_chi(double r) noexcept { return 1.0 - one_minus_chi(r).s0; }

double gen_oL_ratio(std::span<const double> x, const LyapunovSpec& spec, const Drift& drift) {
  const double r = norm(x);
  if (r == 0.0) throw ValidationError("gen_oL_ratio: x = 0 is the singular point");
  const auto d = static_cast<double>(x.size());
  // b(x) = g x, so b.grad f = g r f'.
  const double g = drift.radial_factor(r);
  return std::visit(overloaded{
                        [&](const ExpRadialW& w) {
                          if (r <= 0.5) return 0.0;
                          const Radial L = radial_L(r);
                          const double lap = L.f2 + (d - 1.0) * L.f1 / r;
                          const double eps = w.epsilon;
                          return eps * g * r * L.f1 + 0.5 * eps * eps * L.f1 * L.f1 + 0.5 * eps * lap;
                        },
                        [&](const PowerRadialW& w) {
                          if (r <= 0.5) return 0.0;
                          const Radial l = radial_power(r, w.exponent);
                          const double lap = l.f2 + (d - 1.0) * l.f1 / r;
                          return (g * r * l.f1 + 0.5 * lap) / (l.f + 1.0);
                        },
                        [](const KineticW&) -> double {
                          throw ValidationError("gen_oL_ratio: the kinetic W belongs to the kinetic model");
                        },
                        [](const UnitW&) { return 0.0; },
                    },
                    spec.variant());
}

double gen_kL_ratio(std::span<const double> x, std::span<const double> v, const KineticW& w, const Drift& drift) {
  const double r = norm(x);
  if (r == 0.0) throw ValidationError("gen_kL_ratio: x = 0 is the singular point");
  const auto d = static_cast<double>(x.size());
  const Smooth s = one_minus_chi(r);
  // G = x q(r), q = S / r; grad G = q I + q' x x^T / r.
  const double q = s.s0 / r;
  const double q1 = (s.s1 * r - s.s0) / (r * r);
  const double xv = dot(x, v);
  const double vv = dot(v, v);
  const double v_gradG_v = q * vv + q1 * xv * xv / r;
  // b_c = -grad V_c = g x.
  const double g = drift.radial_factor(r);
  const double G_dot_gradVc = -g * q * r * r;
  const double v_dot_G = q * xv;
  const double GG = q * q * r * r;
  const double half_sq = 0.5 * (w.a * w.a * vv + 2.0 * w.a * w.b * v_dot_G + w.b * w.b * GG);
  return w.a * d / 2.0 + w.b * v_gradG_v - w.b * G_dot_gradVc - w.a * w.gamma * vv - w.b * w.gamma * v_dot_G +
         half_sq;
}

double kinetic_inf_F(const KineticW& w, const Drift& drift) {
  const auto f = [&](double r) {
    const double S = one_minus_chi(r).s0;
    return w.a * drift.radial_potential(r) - w.b * w.b * S * S / (2.0 * w.a);
  };
  // Coarse log grid, then Brent refinement around the best node.
  std::vector<double> grid{0.0};
  for (double e = -6.0; e <= 6.0 + 1e-12; e += 0.01) grid.push_back(std::pow(10.0, e));
  std::size_t best = 0;
  double best_val = f(0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double val = f(grid[i]);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi > lo) {
    const auto m = boost::math::tools::brent_find_minima(f, lo, hi, 50);
    best_val = std::min(best_val, m.second);
  }
  return best_val;
}

double lyapunov_value(const LyapunovSpec& spec, const ProcessModel& process, const ModelState& s) {
  const auto x = process.position(s);
  const double r = norm(x);
  return std::visit(overloaded{
                        [&](const ExpRadialW& w) { return std::exp(w.epsilon * radial_L(r).f); },
                        [&](const PowerRadialW& w) { return radial_power(r, w.exponent).f + 1.0; },
                        [&](const KineticW& w) {
                          const auto& km = kinetic_of(process);
                          const auto v = std::span<const double>(s.coords).subspan(x.size());
                          const double S = one_minus_chi(r).s0;
                          const double vG = r > 0.0 ? dot(v, x) * S / r : 0.0;
                          const double F = w.a * process.hamiltonian(s) + w.b * vG;
                          return std::exp(F - kinetic_inf_F(w, km.drift));
                        },
                        [](const UnitW&) { return 1.0; },
                    },
                    spec.variant());
}

double generator_ratio(const LyapunovSpec& spec, const ProcessModel& process, const ModelState& s) {
  if (std::holds_alternative<UnitW>(spec.variant())) return 0.0;
  return std::visit(overloaded{
                        [&](const OverdampedModel& m) { return gen_oL_ratio(process.position(s), spec, m.drift); },
                        [&](const KineticModel& m) {
                          const auto* w = std::get_if<KineticW>(&spec.variant());
                          if (w == nullptr) throw ValidationError("lyapunov: the kinetic model needs the kinetic W");
                          if (w->gamma != m.gamma) throw ValidationError("lyapunov: W and model disagree on gamma");
                          const auto x = process.position(s);
                          return gen_kL_ratio(x, std::span<const double>(s.coords).subspan(x.size()), *w, m.drift);
                        },
                        [](const LevyModel&) -> double {
                          throw ValidationError("lyapunov: Levy models are scanned with the unit W only");
                        },
                        [](const InteractingModel&) -> double {
                          throw ValidationError("lyapunov: the interacting model is scanned with the unit W only");
                        },
                    },
                    process.variant());
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ValidationError("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

std::vector<ScanCurve> default_scan_curves(const FeynmanKacModel& model, double lo, double hi, std::size_t n) {
  const auto& process = model.process();
  const auto grid = log_grid(lo, hi, n);
  const auto sdim = static_cast<std::size_t>(process.state_dimension());
  const auto make = [&](const std::string& name, bool low, bool high, auto fill) {
    ScanCurve c{name, {}, low, high};
    for (double t : grid) {
      ModelState s;
      s.coords.assign(sdim, 0.0);
      fill(t, s.coords);
      c.points.push_back({t, std::move(s)});
    }
    return c;
  };
  std::vector<ScanCurve> out;
  if (const auto* im = std::get_if<InteractingModel>(&process.variant())) {
    const auto d = static_cast<std::size_t>(im->levy.dimension);
    // Particle j at (j - (n-1)/2) t e1: pair distances t -> 0 and -> inf together.
    out.push_back(make("pair_separation", true, true, [&](double t, std::vector<double>& c) {
      for (int j = 0; j < im->n; ++j)
        c[static_cast<std::size_t>(j) * d] = (j - (im->n - 1) / 2.0) * t;
    }));
    out.push_back(make("translation", false, true, [&](double t, std::vector<double>& c) {
      for (int j = 0; j < im->n; ++j) {
        const auto base = static_cast<std::size_t>(j) * d;
        c[base] = t;
        if (d >= 2)
          c[base + 1] = j;
        else
          c[base] += j;
      }
    }));
    return out;
  }
  if (std::holds_alternative<LineChargePotential>(model.potential().variant())) {
    out.push_back(make("axis_distance", true, true, [](double t, std::vector<double>& c) { c[0] = t; }));
    out.push_back(make("along_axis", false, true, [](double t, std::vector<double>& c) {
      c[0] = 1.0;
      c[2] = t;
    }));
    return out;
  }
  out.push_back(make("radial", true, true, [](double t, std::vector<double>& c) { c[0] = t; }));
  if (process.is_kinetic()) {
    const auto d = static_cast<std::size_t>(process.position_dimension());
    out.push_back(make("velocity", false, true, [d](double t, std::vector<double>& c) {
      c[0] = 2.0;
      c[d] = t;
    }));
    out.push_back(make("diagonal", true, true, [d](double t, std::vector<double>& c) {
      c[0] = t;
      c[d + 1] = t;
    }));
  }
  return out;
}

bool LyapunovReport::passed() const noexcept {
  return !summaries.empty() && std::all_of(summaries.begin(), summaries.end(), [](const ScanSummary& s) {
    return s.passed;
  });
}

LyapunovReport drift_scan(const FeynmanKacModel& model, const LyapunovSpec& spec, std::span<const double> p_list,
                          std::span<const ScanCurve> curves, const ScanOptions& options) {
  LyapunovReport report;
  report.spec_name = spec.name();
  const auto& process = model.process();
  for (const auto& curve : curves) {
    const std::size_t n = curve.points.size();
    if (n < 2 * options.tail) throw ValidationError("drift_scan: curve '" + curve.name + "' is too short");
    std::vector<double> ratio(n);
    std::vector<double> V(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& st = curve.points[i].state;
      const ExtendedReal v = model.potential()(process.position(st));
      if (v.is_infinite()) throw ValidationError("drift_scan: a scan point lies on the singular set");
      V[i] = v.value();
      ratio[i] = generator_ratio(spec, process, st);
    }
    for (double p : p_list) {
      ScanSummary sum;
      sum.curve = curve.name;
      sum.p = p;
      std::vector<double> r(n);
      sum.max_outside_core = -std::numeric_limits<double>::infinity();
      sum.m0 = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        r[i] = ratio[i] - p * V[i];
        report.rows.push_back({curve.name, curve.points[i].coordinate, p, ratio[i], r[i]});
        const double c = curve.points[i].coordinate;
        if (c < options.core_low || c > options.core_high) sum.max_outside_core = std::max(sum.max_outside_core, r[i]);
        sum.m0 = std::max(sum.m0, ratio[i] - V[i]);
      }
      sum.low_end = r.front();
      sum.high_end = r.back();
      if (curve.check_low_end) {
        sum.low_below = r.front() < -options.threshold;
        for (std::size_t i = 0; i + 1 < options.tail; ++i) sum.low_monotone = sum.low_monotone && r[i] < r[i + 1];
        for (std::size_t i = 0; i < options.tail; ++i)
          sum.level_set_compact = sum.level_set_compact && r[i] <= -options.r0;
      }
      if (curve.check_high_end) {
        sum.high_below = r.back() < -options.threshold;
        for (std::size_t i = n - options.tail; i + 1 < n; ++i)
          sum.high_monotone = sum.high_monotone && r[i] > r[i + 1];
        for (std::size_t i = n - options.tail; i < n; ++i)
          sum.level_set_compact = sum.level_set_compact && r[i] <= -options.r0;
      }
      sum.passed = sum.low_below && sum.high_below && sum.low_monotone && sum.high_monotone;
      report.summaries.push_back(sum);
    }
  }
  return report;
}

FdCheck fd_generator_check(const LyapunovSpec& spec, const ProcessModel& process, const ModelState& s, double h) {
  if (!(h > 0.0)) throw ValidationError("fd_generator_check: h must be positive");
  const auto W = [&](const ModelState& st) { return lyapunov_value(spec, process, st); };
  const double w0 = W(s);
  const auto pd = static_cast<std::size_t>(process.position_dimension());

  // First and second central differences along coordinate i.
  const auto diff = [&](std::size_t i, double& first, double& second) {
    ModelState plus = s;
    ModelState minus = s;
    plus.coords[i] += h;
    minus.coords[i] -= h;
    const double wp = W(plus);
    const double wm = W(minus);
    first = (wp - wm) / (2.0 * h);
    second = (wp - 2.0 * w0 + wm) / (h * h);
  };

  double fd = 0.0;
  if (const auto* om = std::get_if<OverdampedModel>(&process.variant())) {
    const auto b = om->drift(process.position(s));
    for (std::size_t i = 0; i < pd; ++i) {
      double d1 = 0.0;
      double d2 = 0.0;
      diff(i, d1, d2);
      fd += b[i] * d1 + 0.5 * d2;
    }
  } else if (const auto* km = std::get_if<KineticModel>(&process.variant())) {
    const auto x = process.position(s);
    const auto b = km->drift(x);
    for (std::size_t i = 0; i < pd; ++i) {
      double d1 = 0.0;
      double d2 = 0.0;
      const double vi = s.coords[pd + i];
      diff(i, d1, d2);
      fd += vi * d1;
      diff(pd + i, d1, d2);
      fd += (b[i] - km->gamma * vi) * d1 + 0.5 * d2;
    }
  } else {
    throw ValidationError("fd_generator_check: needs the overdamped or kinetic model");
  }
  FdCheck out;
  out.analytic = generator_ratio(spec, process, s) * w0;
  out.finite_difference = fd;
  out.abs_error = std::abs(out.analytic - fd);
  out.rel_error = out.abs_error / std::max(std::abs(out.analytic), w0);
  return out;
}

}  // namespace fkqsd
