#include "fkqsd/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fkqsd/errors.hpp"

namespace fkqsd {

Histogram::Histogram(HistogramSpec spec) : spec_(std::move(spec)) {
  const std::size_t k = spec_.lower.size();
  if (k == 0 || spec_.upper.size() != k) throw ValidationError("histogram: box bounds must be nonempty and match");
  if (spec_.bins_per_axis < 1) throw ValidationError("histogram: need at least one bin per axis");
  for (std::size_t a = 0; a < k; ++a) {
    if (!(spec_.upper[a] > spec_.lower[a])) throw ValidationError("histogram: empty box axis");
  }
  if (spec_.coordinates.empty()) {
    spec_.coordinates.resize(k);
    std::iota(spec_.coordinates.begin(), spec_.coordinates.end(), 0);
  }
  if (spec_.coordinates.size() != k) throw ValidationError("histogram: one coordinate per box axis");
  std::size_t n = 1;
  for (std::size_t a = 0; a < k; ++a) n *= static_cast<std::size_t>(spec_.bins_per_axis);
  masses_.assign(n, 0.0);
}

double Histogram::total() const noexcept {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0) + overflow_;
}

std::size_t Histogram::bin_index(std::span<const double> position) const {
  std::size_t index = 0;
  const auto bins = static_cast<std::size_t>(spec_.bins_per_axis);
  for (std::size_t a = 0; a < axes(); ++a) {
    const auto c = static_cast<std::size_t>(spec_.coordinates[a]);
    if (c >= position.size()) throw ValidationError("histogram: coordinate index beyond the position");
    const double x = position[c];
    if (!(x >= spec_.lower[a] && x < spec_.upper[a])) return npos;
    const double width = (spec_.upper[a] - spec_.lower[a]) / static_cast<double>(bins);
    auto b = static_cast<std::size_t>(std::floor((x - spec_.lower[a]) / width));
    b = std::min(b, bins - 1);
    index = index * bins + b;
  }
  return index;
}

std::vector<double> Histogram::bin_center(std::size_t bin) const {
  const auto bins = static_cast<std::size_t>(spec_.bins_per_axis);
  std::vector<double> c(axes());
  for (std::size_t a = axes(); a-- > 0;) {
    const std::size_t b = bin % bins;
    bin /= bins;
    const double width = (spec_.upper[a] - spec_.lower[a]) / static_cast<double>(bins);
    c[a] = spec_.lower[a] + (static_cast<double>(b) + 0.5) * width;
  }
  return c;
}

double Histogram::mass_at(std::span<const double> position) const {
  const std::size_t b = bin_index(position);
  return b == npos ? overflow_ : masses_[b];
}

void Histogram::add(std::span<const double> position, double weight) {
  const std::size_t b = bin_index(position);
  if (b == npos) {
    overflow_ += weight;
  } else {
    masses_[b] += weight;
  }
}

void Histogram::merge(const Histogram& other) {
  if (!same_binning(other)) throw ValidationError("histogram: binning mismatch");
  for (std::size_t b = 0; b < masses_.size(); ++b) masses_[b] += other.masses_[b];
  overflow_ += other.overflow_;
}

void Histogram::normalize() {
  const double t = total();
  if (!(t > 0.0)) return;
  for (double& m : masses_) m /= t;
  overflow_ /= t;
}

std::vector<double> Histogram::sample_in_bin(std::size_t bin, RandomStream& rng) const {
  std::vector<double> c = bin_center(bin);
  for (std::size_t a = 0; a < axes(); ++a) {
    const double width = (spec_.upper[a] - spec_.lower[a]) / static_cast<double>(spec_.bins_per_axis);
    c[a] += (rng.uniform() - 0.5) * width;
  }
  return c;
}

std::size_t Histogram::sample_bin(RandomStream& rng) const {
  const double in_box = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  if (!(in_box > 0.0)) throw ValidationError("histogram: no mass inside the box to sample from");
  const double target = rng.uniform() * in_box;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t b = 0; b < masses_.size(); ++b) {
    if (masses_[b] <= 0.0) continue;
    acc += masses_[b];
    last = b;
    if (target < acc) return b;
  }
  return last;
}

double tv_distance(const Histogram& h1, const Histogram& h2) {
  if (!h1.same_binning(h2)) throw ValidationError("tv_distance: binning mismatch");
  const double t1 = h1.total();
  const double t2 = h2.total();
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw ValidationError("tv_distance: empty histogram");
  double s = std::abs(h1.overflow() / t1 - h2.overflow() / t2);
  for (std::size_t b = 0; b < h1.bin_count(); ++b) s += std::abs(h1.masses()[b] / t1 - h2.masses()[b] / t2);
  return 0.5 * s;
}

}  // namespace fkqsd
