#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fkqsd/dynamics.hpp"
#include "fkqsd/geometry.hpp"
#include "fkqsd/potentials.hpp"

namespace fkqsd {

class Histogram;

/// A process, the potential weighting it, and the domain killing it.
class FeynmanKacModel {
 public:
  /// Throws ValidationError when the three parts disagree on dimensions or
  /// the potential type does not fit the process (e.g. U_S needs the interacting model).
  FeynmanKacModel(ProcessModel process, PotentialField potential, Domain domain);

  [[nodiscard]] const ProcessModel& process() const noexcept { return process_; }
  [[nodiscard]] const PotentialField& potential() const noexcept { return potential_; }
  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }

  [[nodiscard]] bool contains(const ModelState& s) const {
    return fkqsd::contains(domain_, potential_, process_.position(s));
  }
  [[nodiscard]] double singularity_distance(const ModelState& s) const {
    return potential_.singularity_distance(process_.position(s));
  }

  /// Same process and domain with V replaced by V + shift.
  [[nodiscard]] FeynmanKacModel with_potential_shift(double shift) const;
  [[nodiscard]] FeynmanKacModel with_domain(Domain domain) const;

 private:
  ProcessModel process_;
  PotentialField potential_;
  Domain domain_;
};

struct PathResult {
  ModelState endpoint;
  /// t < exit time.
  bool alive = true;
  /// -int_0^t V ds by the trapezoidal rule on step endpoints; -inf after a singular hit.
  double log_weight = 0.0;
  /// The same integral without the constant offset of V (identical for V and V + c).
  double log_weight_shape = 0.0;
  /// First step index whose state left the domain.
  std::optional<std::size_t> exit_step;
  /// Over the states that were inside the domain.
  double min_singularity_distance = 0.0;
  std::size_t stiff_steps = 0;
};

PathResult run_killed_weighted_path(const FeynmanKacModel& model, const ModelState& start, double dt,
                                    std::size_t n_steps, RandomStream& rng);

/// Number of steps of size dt in t; throws unless t/dt is an integer (to 1e-9 relative).
std::size_t steps_for(double t, double dt);

/// n_paths independent paths; path j uses stream (seed, path, 0, j).
std::vector<PathResult> simulate_paths(const FeynmanKacModel& model, const ModelState& start, double dt,
                                       std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                       unsigned workers = 1);

/// Log-weights below this are materialized as an exact 0.
inline constexpr double kLogUnderflow = -700.0;

struct QtEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_alive = 0;
  std::size_t underflow_count = 0;
  /// No path contributed any mass.
  bool zero_mass = false;
};

using TestFunction = std::function<double(const ModelState&)>;

/// Monte Carlo estimate of Q_t f(x) = E_x[f(X_t) exp(-int_0^t V) 1{t < exit}].
QtEstimate estimate_Qt_f(const FeynmanKacModel& model, const ModelState& start, const TestFunction& f,
                         double t, double dt, std::size_t n_paths, std::uint64_t seed, unsigned workers = 1);

struct EigenfunctionEstimate {
  std::vector<double> values;
  std::vector<double> standard_errors;
};

/// phi(x) ~ exp(lambda T) Q_T 1(x) on each grid state, scaled so that the
/// rho-weighted grid average is 1 when `rho` is given, else so that the
/// largest value is 1. Throws NonConvergenceError if every estimate is 0.
EigenfunctionEstimate estimate_eigenfunction(const FeynmanKacModel& model, std::span<const ModelState> grid,
                                             double lambda, double horizon, double dt, std::size_t n_paths,
                                             std::uint64_t seed, unsigned workers = 1,
                                             const Histogram* rho = nullptr);

/// Fraction of paths whose closest approach to the singular set is below each delta.
std::vector<double> near_singularity_fractions(std::span<const PathResult> paths, std::span<const double> deltas);

}  // namespace fkqsd
