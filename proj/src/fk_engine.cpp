#include "fkqsd/fk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fkqsd/errors.hpp"
#include "fkqsd/histogram.hpp"
#include "fkqsd/parallel.hpp"
#include "fkqsd/stats.hpp"

namespace fkqsd {

FeynmanKacModel::FeynmanKacModel(ProcessModel process, PotentialField potential, Domain domain)
    : process_(std::move(process)), potential_(std::move(potential)), domain_(std::move(domain)) {
  const int pos = process_.position_dimension();
  if (potential_.position_dimension() != pos)
    throw ValidationError("model: potential dimension " + std::to_string(potential_.position_dimension()) +
                          " does not match the process position dimension " + std::to_string(pos));
  if (domain_.dimension() != pos) throw ValidationError("model: domain dimension does not match the process");
  const bool interacting_process = std::holds_alternative<InteractingModel>(process_.variant());
  const bool interaction_potential = std::holds_alternative<InteractionPotential>(potential_.variant());
  if (interacting_process != interaction_potential)
    throw ValidationError("model: the interacting process goes with an interaction potential, and only with it");
  if (interacting_process) {
    const auto& m = std::get<InteractingModel>(process_.variant());
    const auto& u = std::get<InteractionPotential>(potential_.variant());
    if (m.n != u.particles() || m.levy.dimension != u.particle_dimension())
      throw ValidationError("model: particle count or particle dimension mismatch");
  }
}

FeynmanKacModel FeynmanKacModel::with_potential_shift(double shift) const {
  return {process_, potential_.shifted(shift), domain_};
}

FeynmanKacModel FeynmanKacModel::with_domain(Domain domain) const {
  return {process_, potential_, std::move(domain)};
}

std::size_t steps_for(double t, double dt) {
  if (!(dt > 0.0) || !(t >= 0.0)) throw ValidationError("need t >= 0 and dt > 0");
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ValidationError("t / dt must be an integer");
  return static_cast<std::size_t>(rounded);
}

PathResult run_killed_weighted_path(const FeynmanKacModel& model, const ModelState& start, double dt,
                                    std::size_t n_steps, RandomStream& rng) {
  if (!model.contains(start)) throw ValidationError("path: start state is outside the domain or singular");
  const auto& process = model.process();
  const auto& potential = model.potential();

  PathResult out;
  out.endpoint = start;
  out.min_singularity_distance = model.singularity_distance(start);

  ExtendedReal v_prev = potential.without_offset(process.position(start));
  double shape = v_prev.is_infinite() ? -std::numeric_limits<double>::infinity() : 0.0;
  std::size_t taken = 0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    if (process.advance(out.endpoint, dt, rng).stiff) ++out.stiff_steps;
    if (!model.contains(out.endpoint)) {
      out.alive = false;
      out.exit_step = k;
      break;
    }
    taken = k;
    out.min_singularity_distance =
        std::min(out.min_singularity_distance, model.singularity_distance(out.endpoint));
    const ExtendedReal v_new = potential.without_offset(process.position(out.endpoint));
    if (v_new.is_infinite() || v_prev.is_infinite()) {
      shape = -std::numeric_limits<double>::infinity();
    } else {
      shape -= dt * (v_prev.value() + v_new.value()) / 2.0;
    }
    v_prev = v_new;
  }
  if (out.min_singularity_distance <= 0.0)
    throw std::logic_error("path: a retained state sits on the singular set");
  out.log_weight_shape = shape;
  out.log_weight = shape - potential.offset() * (static_cast<double>(taken) * dt);
  return out;
}

std::vector<PathResult> simulate_paths(const FeynmanKacModel& model, const ModelState& start, double dt,
                                       std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                       unsigned workers) {
  std::vector<PathResult> paths(n_paths);
  parallel_for(n_paths, workers, [&](std::size_t j) {
    RandomStream rng(derive_seed(seed, StreamPurpose::path, 0, j));
    paths[j] = run_killed_weighted_path(model, start, dt, n_steps, rng);
  });
  return paths;
}


QtEstimate estimate_Qt_f(const FeynmanKacModel& model, const ModelState& start, const TestFunction& f,
                         double t, double dt, std::size_t n_paths, std::uint64_t seed, unsigned workers) {
  if (n_paths < 2) throw ValidationError("estimate_Qt_f: need at least 2 paths");
  const std::size_t n_steps = steps_for(t, dt);
  std::vector<double> contribution(n_paths, 0.0);
  std::vector<char> alive(n_paths, 0);
  std::vector<char> underflow(n_paths, 0);
  parallel_for(n_paths, workers, [&](std::size_t j) {
    RandomStream rng(derive_seed(seed, StreamPurpose::path, 0, j));
    const PathResult p = run_killed_weighted_path(model, start, dt, n_steps, rng);
    if (!p.alive) return;
    alive[j] = 1;
    if (p.log_weight < kLogUnderflow) {
      underflow[j] = std::isfinite(p.log_weight) ? 1 : 0;
      return;
    }
    contribution[j] = f(p.endpoint) * std::exp(p.log_weight);
  });
  QtEstimate out;
  out.n_paths = n_paths;
  for (std::size_t j = 0; j < n_paths; ++j) {
    out.n_alive += alive[j];
    out.underflow_count += underflow[j];
  }
  const MeanError me = mean_and_error(contribution);
  out.mean = me.mean;
  out.standard_error = me.standard_error;
  out.zero_mass = std::all_of(contribution.begin(), contribution.end(), [](double c) { return c == 0.0; });
  return out;
}

EigenfunctionEstimate estimate_eigenfunction(const FeynmanKacModel& model, std::span<const ModelState> grid,
                                             double lambda, double horizon, double dt, std::size_t n_paths,
                                             std::uint64_t seed, unsigned workers, const Histogram* rho) {
  EigenfunctionEstimate out;
  const auto one = [](const ModelState&) { return 1.0; };
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const QtEstimate q = estimate_Qt_f(model, grid[g], one, horizon, dt, n_paths,
                                       derive_seed(seed, StreamPurpose::path, 1, g), workers);
    const double scale = std::exp(lambda * horizon);
    out.values.push_back(scale * q.mean);
    out.standard_errors.push_back(scale * q.standard_error);
  }
  double norm = 0.0;
  if (rho != nullptr) {
    double total = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double w = rho->mass_at(model.process().position(grid[g]));
      norm += w * out.values[g];
      total += w;
    }
    if (total > 0.0) norm /= total;
  } else {
    norm = out.values.empty() ? 0.0 : *std::max_element(out.values.begin(), out.values.end());
  }
  if (!(norm > 0.0))
    throw NonConvergenceError("estimate_eigenfunction: all grid estimates vanish; shorten the horizon or add paths");
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out.values[g] /= norm;
    out.standard_errors[g] /= norm;
  }
  return out;
}

std::vector<double> near_singularity_fractions(std::span<const PathResult> paths, std::span<const double> deltas) {
  std::vector<double> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    std::size_t count = 0;
    for (const auto& p : paths) count += p.min_singularity_distance < delta ? 1 : 0;
    out.push_back(paths.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(paths.size()));
  }
  return out;
}

}  // namespace fkqsd
