#include "fkqsd/particle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fkqsd/errors.hpp"
#include "fkqsd/parallel.hpp"
#include "fkqsd/stats.hpp"

namespace fkqsd {

Ensemble make_ensemble(const FeynmanKacModel& model, const ModelState& start, std::size_t n) {
  return make_ensemble(model, std::vector<ModelState>(n, start));
}

Ensemble make_ensemble(const FeynmanKacModel& model, std::vector<ModelState> states) {
  if (states.empty()) throw ValidationError("ensemble: need at least one particle");
  const auto dim = static_cast<std::size_t>(model.process().state_dimension());
  for (const auto& s : states) {
    if (s.coords.size() != dim) throw ValidationError("ensemble: state dimension mismatch");
    if (!model.contains(s)) throw ValidationError("ensemble: initial state outside the domain or singular");
  }
  Ensemble e;
  e.states = std::move(states);
  return e;
}

std::vector<std::size_t> resample_systematic(std::span<const double> weights, RandomStream& rng) {
  const std::size_t n = weights.size();
  double total = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw ValidationError("resample: weights must be finite and non-negative");
    total += weights[i];
    if (weights[i] > 0.0) last_positive = i;
  }
  if (!(total > 0.0)) throw ValidationError("resample: all weights are zero");

  // Cumulative weights scaled to end at N; position k is u + k with u in (0, 1).
  const double scale = static_cast<double>(n) / total;
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += weights[i] * scale;
    cum[i] = acc;
  }
  const double u = rng.uniform();
  std::vector<std::size_t> out(n);
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = u + static_cast<double>(k);
    while (i < last_positive && cum[i] <= target) ++i;
    out[k] = i;
  }
  return out;
}

EpochResult smc_epoch(Ensemble& ensemble, const FeynmanKacModel& model, double delta, double dt,
                      std::uint64_t seed, unsigned workers, WeightedSnapshot* snapshot) {
  if (ensemble.extinct) throw ValidationError("smc_epoch: the ensemble is extinct");
  const std::size_t n = ensemble.states.size();
  if (n == 0) throw ValidationError("smc_epoch: empty ensemble");
  const std::size_t n_steps = steps_for(delta, dt);
  const std::size_t epoch = ensemble.epoch_index;

  std::vector<PathResult> paths(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, StreamPurpose::epoch_propagation, epoch, i));
    paths[i] = run_killed_weighted_path(model, ensemble.states[i], dt, n_steps, rng);
  });

  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  double top = neg_inf;
  for (const auto& p : paths)
    if (p.alive) top = std::max(top, p.log_weight_shape);

  EpochResult result;
  ++ensemble.epoch_index;
  if (top == neg_inf) {
    result.log_m = neg_inf;
    result.extinct = true;
    ensemble.extinct = true;
    if (snapshot != nullptr) *snapshot = {};
    return result;
  }

  std::vector<double> w(n, 0.0);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!paths[i].alive) continue;
    w[i] = std::exp(paths[i].log_weight_shape - top);
    sum += w[i];
    sum2 += w[i] * w[i];
  }
  result.log_m = (top + std::log(sum / static_cast<double>(n))) - model.potential().offset() * delta;
  result.ess = sum * sum / sum2;
  ensemble.log_norm_trace.push_back(result.log_m);
  ensemble.ess_trace.push_back(result.ess);

  if (snapshot != nullptr) {
    snapshot->states.resize(n);
    snapshot->weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      snapshot->states[i] = paths[i].endpoint;
      snapshot->weights[i] = w[i] / sum;
    }
  }

  RandomStream rng(derive_seed(seed, StreamPurpose::resampling, epoch, 0));
  const auto idx = resample_systematic(w, rng);
  std::vector<ModelState> next(n);
  for (std::size_t k = 0; k < n; ++k) next[k] = paths[idx[k]].endpoint;
  ensemble.states = std::move(next);
  return result;
}

LambdaEstimate estimate_lambda(std::span<const double> trace, double delta, double burn_in_fraction) {
  if (!(delta > 0.0)) throw ValidationError("estimate_lambda: delta must be positive");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw ValidationError("estimate_lambda: burn-in fraction must lie in [0, 1)");
  const auto start = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(trace.size())));
  const auto used = trace.subspan(start);
  if (used.size() < 10) throw ValidationError("estimate_lambda: fewer than 10 post-burn-in epochs");
  for (double v : used)
    if (!std::isfinite(v)) throw ValidationError("estimate_lambda: non-finite log m in the trace");

  LambdaEstimate out;
  out.n_used = used.size();
  out.lambda = -mean_and_error(used).mean / delta;

  const std::size_t batches =
      std::max<std::size_t>(5, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(used.size())))));
  const std::size_t size = used.size() / batches;
  const auto tail = used.last(batches * size);
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = mean_and_error(tail.subspan(b * size, size)).mean;
  out.n_batches = batches;
  out.standard_error = mean_and_error(means).standard_error / delta;
  return out;
}

Histogram qsd_histogram(std::span<const ModelState> states, const FeynmanKacModel& model, const HistogramSpec& spec) {
  Histogram h(spec);
  for (const auto& s : states) h.add(model.process().position(s));
  h.normalize();
  return h;
}

namespace {

void add_snapshot(Histogram& h, const FeynmanKacModel& model, const WeightedSnapshot& snap) {
  for (std::size_t i = 0; i < snap.states.size(); ++i)
    if (snap.weights[i] > 0.0) h.add(model.process().position(snap.states[i]), snap.weights[i]);
}

/// The histogram axes must cover every position coordinate exactly once.
void require_full_position_binning(const Histogram& rho, const FeynmanKacModel& model) {
  if (model.process().is_kinetic())
    throw ValidationError("the q.s.d. check needs the full state law; the kinetic histogram bins positions only");
  const auto pos = static_cast<std::size_t>(model.process().position_dimension());
  std::vector<int> coords = rho.spec().coordinates;
  if (coords.empty()) {
    coords.resize(rho.axes());
    std::iota(coords.begin(), coords.end(), 0);
  }
  std::sort(coords.begin(), coords.end());
  bool ok = coords.size() == pos;
  for (std::size_t i = 0; ok && i < pos; ++i) ok = coords[i] == static_cast<int>(i);
  if (!ok) throw ValidationError("the q.s.d. histogram must bin every position coordinate");
}

}  // namespace

SmcRun run_particle_system(const FeynmanKacModel& model, Ensemble ensemble, const SmcConfig& config) {
  if (config.epochs == 0) throw ValidationError("particles: need at least one epoch");
  SmcRun run;
  const auto burn = static_cast<std::size_t>(std::floor(config.burn_in_fraction * static_cast<double>(config.epochs)));
  if (config.histogram) run.qsd.emplace(*config.histogram);
  WeightedSnapshot snap;
  for (std::size_t k = 0; k < config.epochs; ++k) {
    const bool record = run.qsd.has_value() && k >= burn;
    const EpochResult r =
        smc_epoch(ensemble, model, config.delta, config.dt, config.seed, config.workers, record ? &snap : nullptr);
    run.epochs.push_back(r);
    if (r.extinct) break;
    if (record) add_snapshot(*run.qsd, model, snap);
  }
  if (!ensemble.extinct) {
    try {
      run.lambda = estimate_lambda(ensemble.log_norm_trace, config.delta, config.burn_in_fraction);
    } catch (const ValidationError&) {
      run.lambda.reset();
    }
  }
  if (run.qsd) {
    if (ensemble.extinct || run.qsd->total() <= 0.0)
      run.qsd.reset();
    else
      run.qsd->normalize();
  }
  run.ensemble = std::move(ensemble);
  return run;
}

QsdCheck quasi_stationarity_check(const Histogram& rho, const FeynmanKacModel& model, double delta, double dt,
                                  std::size_t n_particles, std::uint64_t seed, unsigned workers) {
  require_full_position_binning(rho, model);
  if (n_particles == 0) throw ValidationError("q.s.d. check: need particles");
  bool any_mass = false;
  for (double m : rho.masses()) any_mass = any_mass || m > 0.0;
  if (!any_mass) throw ValidationError("q.s.d. check: rho has no mass inside its box");

  const auto pos = static_cast<std::size_t>(model.process().position_dimension());
  std::vector<int> coords = rho.spec().coordinates;
  if (coords.empty()) {
    coords.resize(rho.axes());
    std::iota(coords.begin(), coords.end(), 0);
  }

  // Draw from rho.
  std::vector<ModelState> starts(n_particles);
  parallel_for(n_particles, workers, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, StreamPurpose::qsd_check, 0, i));
    ModelState s;
    s.coords.assign(pos, 0.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const auto box = rho.sample_in_bin(rho.sample_bin(rng), rng);
      for (std::size_t a = 0; a < box.size(); ++a) s.coords[static_cast<std::size_t>(coords[a])] = box[a];
      if (model.contains(s)) {
        starts[i] = s;
        return;
      }
    }
    throw NonConvergenceError("q.s.d. check: could not draw a state inside the domain from rho");
  });

  QsdCheck out;
  Histogram control(rho.spec());
  for (const auto& s : starts) control.add(model.process().position(s));
  out.control_tv = tv_distance(control, rho);

  Ensemble e = make_ensemble(model, std::move(starts));
  e.epoch_index = 0;
  WeightedSnapshot snap;
  // A distinct stream family from the draw above.
  const EpochResult r = smc_epoch(e, model, delta, dt, derive_seed(seed, StreamPurpose::qsd_check, 1, 0), workers, &snap);
  if (r.extinct) {
    out.extinct = true;
    out.tv = 1.0;
    return out;
  }
  Histogram evolved(rho.spec());
  add_snapshot(evolved, model, snap);
  out.tv = tv_distance(evolved, rho);
  return out;
}

ConvergenceTrace convergence_trace(const FeynmanKacModel& model, Ensemble initial, const Histogram& rho,
                                   double delta, double dt, std::size_t n_epochs, std::uint64_t seed,
                                   unsigned workers) {
  ConvergenceTrace out;
  Histogram h0 = qsd_histogram(initial.states, model, rho.spec());
  out.points.push_back({0.0, tv_distance(h0, rho)});
  out.laws.push_back(std::move(h0));
  WeightedSnapshot snap;
  for (std::size_t k = 1; k <= n_epochs; ++k) {
    const EpochResult r = smc_epoch(initial, model, delta, dt, seed, workers, &snap);
    if (r.extinct) {
      out.extinct = true;
      break;
    }
    Histogram h(rho.spec());
    add_snapshot(h, model, snap);
    h.normalize();
    out.points.push_back({static_cast<double>(k) * delta, tv_distance(h, rho)});
    out.laws.push_back(std::move(h));
  }
  return out;
}

DecayFit fit_decay_rate(std::span<const TracePoint> trace, double noise_floor) {
  std::vector<double> t;
  std::vector<double> y;
  for (const auto& p : trace) {
    if (p.tv > noise_floor && p.tv > 0.0) {
      t.push_back(p.t);
      y.push_back(std::log(p.tv));
    }
  }
  if (t.size() < 6) throw ValidationError("fit_decay_rate: fewer than 6 points above the noise floor");
  const double mt = mean_and_error(t).mean;
  const double my = mean_and_error(y).mean;
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(stt > 0.0)) throw ValidationError("fit_decay_rate: trace times are all equal");
  DecayFit fit;
  fit.n_used = t.size();
  fit.slope = sty / stt;
  fit.intercept = my - fit.slope * mt;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * t[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace fkqsd
