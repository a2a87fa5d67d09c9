#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fkqsd/fk_engine.hpp"
#include "fkqsd/histogram.hpp"

namespace fkqsd {

/// N particle states and the per-epoch normalizing factors m_k.
struct Ensemble {
  std::vector<ModelState> states;
  std::size_t epoch_index = 0;
  /// log m_k, m_k = (1/N) sum_i exp(log_weight_i) 1{alive_i}.
  std::vector<double> log_norm_trace;
  std::vector<double> ess_trace;
  bool extinct = false;
};

/// Builds an ensemble of copies of `start`; throws if `start` is outside the domain.
Ensemble make_ensemble(const FeynmanKacModel& model, const ModelState& start, std::size_t n);
Ensemble make_ensemble(const FeynmanKacModel& model, std::vector<ModelState> states);

struct EpochResult {
  double log_m = 0.0;
  double ess = 0.0;
  bool extinct = false;
};

/// Pre-resampling view of one epoch: endpoints and their normalized weights.
struct WeightedSnapshot {
  std::vector<ModelState> states;
  std::vector<double> weights;
};

/// Propagate every particle over `delta` with killing and weighting, record
/// log m_k and the ESS, then resample systematically. Particle i uses stream
/// (seed, epoch_propagation, epoch, i); resampling uses (seed, resampling, epoch, 0).
/// Resampling weights exclude the constant offset of V, so V and V + c give
/// identical index sequences.
EpochResult smc_epoch(Ensemble& ensemble, const FeynmanKacModel& model, double delta, double dt,
                      std::uint64_t seed, unsigned workers = 1, WeightedSnapshot* snapshot = nullptr);

/// Systematic (low-variance) resampling: counts c_i lie in
/// [floor(N w_i), ceil(N w_i)] for normalized weights w. Throws on all-zero weights.
std::vector<std::size_t> resample_systematic(std::span<const double> weights, RandomStream& rng);

struct LambdaEstimate {
  double lambda = 0.0;
  double standard_error = 0.0;
  std::size_t n_used = 0;
  std::size_t n_batches = 0;
};

/// lambda = -(mean post-burn-in log m_k) / delta, error bar by batch means.
LambdaEstimate estimate_lambda(std::span<const double> log_norm_trace, double delta, double burn_in_fraction = 0.5);

/// Normalized histogram of the position components.
Histogram qsd_histogram(std::span<const ModelState> states, const FeynmanKacModel& model, const HistogramSpec& spec);

struct SmcConfig {
  std::size_t n_particles = 1024;
  double delta = 0.1;
  double dt = 0.01;
  std::size_t epochs = 200;
  double burn_in_fraction = 0.5;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// When set, post-burn-in weighted snapshots accumulate into a q.s.d. histogram.
  std::optional<HistogramSpec> histogram;
};

struct SmcRun {
  Ensemble ensemble;
  std::vector<EpochResult> epochs;
  /// Absent when the run went extinct or the trace is too short.
  std::optional<LambdaEstimate> lambda;
  std::optional<Histogram> qsd;
};

/// Runs `config.epochs` epochs (stopping on extinction).
SmcRun run_particle_system(const FeynmanKacModel& model, Ensemble ensemble, const SmcConfig& config);

struct QsdCheck {
  /// TV between rho and its one-epoch normalized evolution.
  double tv = 0.0;
  /// TV between rho and the undeveloped sample drawn from it (sampling + binning floor).
  double control_tv = 0.0;
  bool extinct = false;
};

/// Draws n states from rho (bin by mass, uniform inside the bin, redrawn until
/// inside the domain), evolves them over one epoch with killing and weights,
/// and compares the weighted histogram with rho. rho must bin every position
/// coordinate; the kinetic model is rejected (its histogram omits velocities).
QsdCheck quasi_stationarity_check(const Histogram& rho, const FeynmanKacModel& model, double delta, double dt,
                                  std::size_t n_particles, std::uint64_t seed, unsigned workers = 1);

struct TracePoint {
  double t = 0.0;
  double tv = 0.0;
};

struct ConvergenceTrace {
  std::vector<TracePoint> points;
  /// Histograms of the evolved law at each trace point (same order).
  std::vector<Histogram> laws;
  bool extinct = false;
};

/// TV distance to rho of the normalized evolution of the initial ensemble, one
/// point per epoch (t = 0 included). Extinction truncates the trace.
ConvergenceTrace convergence_trace(const FeynmanKacModel& model, Ensemble initial, const Histogram& rho,
                                   double delta, double dt, std::size_t n_epochs, std::uint64_t seed,
                                   unsigned workers = 1);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_used = 0;
};

/// Least squares of log(tv) on t over the points with tv > noise_floor; needs >= 6 of them.
DecayFit fit_decay_rate(std::span<const TracePoint> trace, double noise_floor = 0.0);

}  // namespace fkqsd
