#pragma once

#include <cstdint>
#include <random>

namespace fkqsd {

/// Tags separating the independent random streams drawn from one master seed.
enum class StreamPurpose : std::uint64_t {
  path = 1,
  epoch_propagation = 2,
  resampling = 3,
  sampler_test = 4,
  initialization = 5,
  qsd_check = 6,
};

/// Deterministic stream derivation: (master seed, purpose, epoch, index) -> engine seed.
/// Built from splitmix64 finalizers so that nearby inputs give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose, std::uint64_t epoch,
                          std::uint64_t index) noexcept;

/// Source of all randomness in the library.
///
/// A silent stream returns the deterministic centre of each law (normal -> 0,
/// uniform -> 1/2, exponential -> 1, gamma(shape) -> shape). Every increment
/// built from it is exactly zero, which gives the "zero-noise substream" used to
/// test the deterministic part of the dynamics.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream silent() {
    RandomStream s(0);
    s.silent_ = true;
    return s;
  }

  [[nodiscard]] bool is_silent() const noexcept { return silent_; }

  double normal() {
    if (silent_) return 0.0;
    return normal_(engine_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    if (silent_) return 0.5;
    double u = 0.0;
    do {
      u = uniform_(engine_);
    } while (u <= 0.0);
    return u;
  }

  double exponential() {
    if (silent_) return 1.0;
    return exponential_(engine_);
  }

  /// Gamma law with the given shape and unit scale.
  double gamma(double shape) {
    if (silent_) return shape;
    std::gamma_distribution<double> g(shape, 1.0);
    return g(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
  bool silent_ = false;
};

}  // namespace fkqsd
