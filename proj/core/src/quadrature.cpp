#include "vflow/quadrature.hpp"

#include <cmath>

#include "vflow/errors.hpp"

namespace vflow {

namespace {

// Gauss-Legendre on [0, 1].
constexpr std::array<double, 4> kGaussX = {
    0.0694318442029737123880267555535953, 0.3300094782075718675986671204483777,
    0.6699905217924281324013328795516223, 0.9305681557970262876119732444464048};
constexpr std::array<double, 4> kGaussW = {
    0.1739274225687269286865319746109997, 0.3260725774312730713134680253890003,
    0.3260725774312730713134680253890003, 0.1739274225687269286865319746109997};

void check_values(const KernelQuadrature& q, std::span<const double> values) {
  if (values.size() != q.size()) throw DomainError("kernel quadrature: values do not match the grid");
}

}  // namespace

KernelQuadrature::KernelQuadrature(const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const double r0 = grid.r0();
  log_ratio_.resize(n);
  for (std::size_t i = 0; i < n; ++i) log_ratio_[i] = grid.log_ratio(i);

  cells_.resize(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double s_a = grid.offset(j);
    const double h = grid.spacing(j);
    CellWeights w{};
    for (std::size_t g = 0; g < kGaussX.size(); ++g) {
      const double x = kGaussX[g];
      const double s = s_a + h * x;
      const double tau = r0 + s;
      const double weight = kGaussW[g] * h * tau;
      const double log_term = std::log1p(s / r0);
      w.tau_left += weight * (1.0 - x);
      w.tau_right += weight * x;
      w.taulog_left += weight * log_term * (1.0 - x);
      w.taulog_right += weight * log_term * x;
    }
    cells_[j] = w;
  }
}

std::vector<double> KernelQuadrature::kernel_integrals(std::span<const double> values) const {
  check_values(*this, values);
  const std::size_t n = size();
  std::vector<double> out(n, 0.0);
  double sum_tau = 0.0;
  double sum_taulog = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const CellWeights& w = cells_[i - 1];
    sum_tau += w.tau_left * values[i - 1] + w.tau_right * values[i];
    sum_taulog += w.taulog_left * values[i - 1] + w.taulog_right * values[i];
    out[i] = log_ratio_[i] * sum_tau - sum_taulog;
  }
  return out;
}

std::vector<double> KernelQuadrature::moment_integrals(std::span<const double> values) const {
  check_values(*this, values);
  const std::size_t n = size();
  std::vector<double> out(n, 0.0);
  double sum_tau = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const CellWeights& w = cells_[i - 1];
    sum_tau += w.tau_left * values[i - 1] + w.tau_right * values[i];
    out[i] = sum_tau;
  }
  return out;
}

double kernel_integral(const RadialGrid& grid, std::span<const double> values, std::size_t r_index) {
  if (values.size() != grid.size()) throw DomainError("kernel_integral: values do not match the grid");
  if (r_index >= grid.size()) throw DomainError("kernel_integral: r_index out of range");
  if (r_index == 0) return 0.0;
  return KernelQuadrature(grid).kernel_integrals(values)[r_index];
}

}  // namespace vflow
