#include "vflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "vflow/errors.hpp"

namespace vflow {

namespace {

void check_span(double r0, double r_end, std::size_t n) {
  if (!std::isfinite(r0) || !std::isfinite(r_end)) throw DomainError("grid: non-finite endpoint");
  if (r0 < 1.0) throw DomainError("grid: r0 must be >= 1");
  if (!(r_end > r0)) throw DomainError("grid: r_end must exceed r0");
  if (n < 3) throw DomainError("grid: at least 3 nodes are required");
}

}  // namespace

RadialGrid::RadialGrid(double r0, std::vector<double> offsets, Grading grading, double ratio)
    : r0_(r0), offsets_(std::move(offsets)), grading_(grading), ratio_(ratio) {
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (!(offsets_[i] > offsets_[i - 1])) throw DomainError("grid: nodes must be strictly increasing");
  }
  log_ratio_.reserve(offsets_.size());
  for (double s : offsets_) log_ratio_.push_back(std::log1p(s / r0_));
}

RadialGrid RadialGrid::uniform(double r0, double r_end, std::size_t n) {
  check_span(r0, r_end, n);
  const double length = r_end - r0;
  std::vector<double> offsets(n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = length * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  offsets.back() = length;
  return RadialGrid(r0, std::move(offsets), Grading::Uniform, 1.0);
}

RadialGrid RadialGrid::geometric(double r0, double r_end, std::size_t n, double ratio) {
  check_span(r0, r_end, n);
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("grid: geometric ratio must lie in (0, 1)");
  const double length = r_end - r0;
  // s_i = L (q^i - 1) / (q^(n-1) - 1) with q = 1 / ratio
  const double log_q = -std::log(ratio);
  const double denom = std::expm1(static_cast<double>(n - 1) * log_q);
  if (!std::isfinite(denom)) throw DomainError("grid: geometric grading overflows; raise the ratio");
  std::vector<double> offsets(n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = length * (std::expm1(static_cast<double>(i) * log_q) / denom);
  }
  offsets.back() = length;
  if (!(offsets[1] > 0.0)) throw DomainError("grid: first spacing underflows; raise the ratio");
  return RadialGrid(r0, std::move(offsets), Grading::GeometricTowardLeft, ratio);
}

double RadialGrid::ratio_for_spread(std::size_t n, double spread) {
  if (n < 3) throw DomainError("grid: at least 3 nodes are required");
  if (!(spread > 1.0)) throw DomainError("grid: spread must exceed 1");
  return std::pow(spread, -1.0 / static_cast<double>(n - 2));
}

RadialGrid RadialGrid::graded(double r0, double r_end, std::size_t n, double spread) {
  return geometric(r0, r_end, n, ratio_for_spread(n, spread));
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> out;
  out.reserve(offsets_.size());
  for (double s : offsets_) out.push_back(r0_ + s);
  return out;
}

std::size_t RadialGrid::last_index_at_or_below(double r) const {
  // tolerate the rounding of r = r0 + s_i so node radii map back to their index
  const double s = r - r0_ + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r);
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
  if (it == offsets_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
}

bool RadialGrid::same_nodes(const RadialGrid& other) const noexcept {
  return r0_ == other.r0_ && offsets_ == other.offsets_;
}

}  // namespace vflow
