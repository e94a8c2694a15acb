#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vflow {

enum class Grading { Uniform, GeometricTowardLeft };

/// Strictly increasing radial nodes starting at r0 >= 1.
///
/// Nodes are stored as offsets s_i = r_i - r0 so that the spacing and
/// ln(r_i / r0) = log1p(s_i / r0) keep full relative precision next to r0,
/// where the graded grids put spacings many orders of magnitude below r0.
class RadialGrid {
 public:
  // Ratio between the last and first spacing used by graded().
  static constexpr double kDefaultSpread = 1e5;

  static RadialGrid uniform(double r0, double r_end, std::size_t n);

  /// Spacings h_i with h_i / h_{i+1} = ratio, ratio in (0, 1); fine near r0.
  static RadialGrid geometric(double r0, double r_end, std::size_t n, double ratio);

  /// Geometric grid whose ratio is chosen so that h_last / h_first = spread.
  static RadialGrid graded(double r0, double r_end, std::size_t n, double spread = kDefaultSpread);

  /// ratio = spread^(-1/(n-2)).
  static double ratio_for_spread(std::size_t n, double spread);

  std::size_t size() const noexcept { return offsets_.size(); }
  double r0() const noexcept { return r0_; }
  double back() const noexcept { return r0_ + offsets_.back(); }
  double node(std::size_t i) const { return r0_ + offsets_[i]; }
  double offset(std::size_t i) const { return offsets_[i]; }
  double spacing(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  /// ln(r_i / r0).
  double log_ratio(std::size_t i) const { return log_ratio_[i]; }

  std::span<const double> offsets() const noexcept { return offsets_; }
  std::vector<double> nodes() const;

  Grading grading() const noexcept { return grading_; }
  /// Spacing ratio for geometric grids, 1 for uniform ones.
  double ratio() const noexcept { return ratio_; }

  /// Index of the last node with r <= r (clamped to the grid).
  std::size_t last_index_at_or_below(double r) const;

  bool same_nodes(const RadialGrid& other) const noexcept;

 private:
  RadialGrid(double r0, std::vector<double> offsets, Grading grading, double ratio);

  double r0_;
  std::vector<double> offsets_;
  std::vector<double> log_ratio_;
  Grading grading_;
  double ratio_;
};

}  // namespace vflow
