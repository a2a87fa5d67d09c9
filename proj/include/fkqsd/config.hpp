#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fkqsd/dynamics.hpp"
#include "fkqsd/fk_engine.hpp"
#include "fkqsd/histogram.hpp"
#include "fkqsd/lyapunov.hpp"

namespace fkqsd {

enum class TheoremCase { oL_case1, oL_case2, levy, kinetic, interacting, line_charge, nonsingular };

const char* to_string(TheoremCase c) noexcept;
TheoremCase parse_theorem_case(const std::string& s);

enum class PotentialType { point, interaction, line_charge };

struct PotentialSettings {
  PotentialType type = PotentialType::point;
  SingularProfile singular;
  std::optional<PowerConfining> confining;
  double offset = 0.0;
};

struct ParticleSettings {
  std::size_t n = 1024;
  double delta = 0.1;
  std::size_t epochs = 200;
  double burn_in = 0.5;
  /// Full start state; empty selects a default inside the domain.
  std::vector<double> start;
  /// Paths for `simulate`.
  std::size_t n_paths = 1000;
  double horizon = 1.0;
  /// q.s.d. histogram box (empty: no histogram).
  std::vector<double> box_lower;
  std::vector<double> box_upper;
  int bins = 64;
  std::vector<int> coordinates;
  /// Fresh particles drawn from rho for the q.s.d. check.
  std::size_t check_particles = 65536;
  std::size_t convergence_epochs = 40;
  /// Point-mass start for the convergence trace (empty: `start`).
  std::vector<double> convergence_start;
  /// 0: twice the same-law control TV of the q.s.d. check.
  double noise_floor = 0.0;
};

struct LyapunovSettings {
  LyapunovVariant spec = UnitW{};
  std::vector<double> p_list{1.5, 2.0, 4.0};
  double scan_min = 1e-3;
  double scan_max = 1e3;
  std::size_t scan_points = 121;
  double threshold = 100.0;
  double r0 = 1.0;
};

struct SamplerSettings {
  std::size_t samples = 100000;
  std::vector<double> dt{0.01, 0.1};
  double u_max = 3.0;
  std::size_t frequencies = 20;
};

struct OracleSettings {
  std::size_t grid_n = 400;
  /// 0: chosen from the potential's rise.
  double r_max = 0.0;
};

/// A parsed, typed experiment description. Building the model validates it.
struct ExperimentConfig {
  TheoremCase theorem_case = TheoremCase::oL_case1;
  ModelVariant process = OverdampedModel{Drift(DriftSpec{}), 2};
  double dt = 1e-3;
  PotentialSettings potential;
  DomainShape domain = FullSpace{};
  ParticleSettings particles;
  LyapunovSettings lyapunov;
  SamplerSettings sampler;
  OracleSettings oracle;
  std::string output_directory = "out";
  std::uint64_t seed = 0;
};

/// Parses the INI-style text (top-level `theorem_case`, sections [process],
/// [potential], [domain], [particles], [lyapunov], [sampler], [oracle], [output]).
/// Unknown keys and a missing seed are ValidationErrors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Every key with its resolved value, at full precision; parses back to the same config.
std::string resolved_config_text(const ExperimentConfig& config);

/// Process, potential and domain assembled and validated.
FeynmanKacModel build_model(const ExperimentConfig& config);

/// Throws ValidationError when the model does not meet the hypotheses of the declared case.
void validate_theorem_case(TheoremCase theorem_case, const FeynmanKacModel& model);

/// Start state from the config, or the first default candidate inside the domain.
ModelState start_state(const ExperimentConfig& config, const FeynmanKacModel& model);

std::optional<HistogramSpec> histogram_spec(const ExperimentConfig& config);

}  // namespace fkqsd
