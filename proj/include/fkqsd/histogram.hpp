#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fkqsd/random.hpp"

namespace fkqsd {

/// Regular grid over a box in selected position coordinates.
struct HistogramSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  int bins_per_axis = 64;
  /// Position coordinates binned, one per box axis; empty means 0..k-1.
  std::vector<int> coordinates;

  friend bool operator==(const HistogramSpec&, const HistogramSpec&) = default;
};

/// Weighted counts on half-open bins [lo, hi), plus one overflow bin for mass
/// outside the box (it takes part in normalization and TV distances).
class Histogram {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit Histogram(HistogramSpec spec);

  [[nodiscard]] const HistogramSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::size_t axes() const noexcept { return spec_.lower.size(); }
  [[nodiscard]] std::size_t bin_count() const noexcept { return masses_.size(); }
  [[nodiscard]] const std::vector<double>& masses() const noexcept { return masses_; }
  [[nodiscard]] double overflow() const noexcept { return overflow_; }
  [[nodiscard]] double total() const noexcept;

  /// Bin of a position (npos when outside the box).
  [[nodiscard]] std::size_t bin_index(std::span<const double> position) const;
  [[nodiscard]] std::vector<double> bin_center(std::size_t bin) const;
  /// Mass of the bin holding `position` (the overflow mass outside the box).
  [[nodiscard]] double mass_at(std::span<const double> position) const;
  [[nodiscard]] bool same_binning(const Histogram& other) const noexcept { return spec_ == other.spec_; }

  void add(std::span<const double> position, double weight = 1.0);
  /// Adds another histogram's masses (same binning).
  void merge(const Histogram& other);
  /// Scales the masses to total 1; no-op on an empty histogram.
  void normalize();

  /// Uniform point inside a bin, in box coordinates.
  [[nodiscard]] std::vector<double> sample_in_bin(std::size_t bin, RandomStream& rng) const;
  /// Bin index drawn with probability proportional to in-box mass.
  [[nodiscard]] std::size_t sample_bin(RandomStream& rng) const;

 private:
  HistogramSpec spec_;
  std::vector<double> masses_;
  double overflow_ = 0.0;
};

/// 1/2 sum_b |h1_b - h2_b| over all bins and the overflow bin of normalized copies.
double tv_distance(const Histogram& h1, const Histogram& h2);

}  // namespace fkqsd
