#include "vflow/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "vflow/errors.hpp"
#include "vflow/io.hpp"

namespace vflow {

namespace {

constexpr double kLogDecades = 12.0;     // sample grids span [delta * 1e-12, delta]
constexpr double kMinRelSeparation = 1e-6;
constexpr std::uint64_t kHolderSeed = 0x5eed'0f'70'1a'5eedULL;

double classical_law(double psi) {
  if (psi == 0.0) return 0.0;
  return psi - std::copysign(std::sqrt(std::abs(psi)), psi);
}

double oscillatory_law(double psi, double c1, double c2) {
  if (psi == 0.0) return 0.0;
  const double p2 = psi * psi;
  const double bracket = 1.0 + c1 - std::sin(c2 * p2 / (p2 + 1.0));
  return psi - std::copysign(std::sqrt(std::abs(psi)), psi) * bracket;
}

// Portable uniform draw on [0, 1); std::uniform_real_distribution is not
// bit-reproducible across standard libraries.
double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double log_spaced(double delta, double t) {
  return delta * std::pow(10.0, -kLogDecades * t);
}

}  // namespace

double oscillatory_c2_bound() {
  return (17.0 * std::sqrt(2.0) - 24.0) / 2.0;
}

bool validate_oscillatory_constants(double c1, double c2) {
  if (!std::isfinite(c1) || !std::isfinite(c2)) return false;
  return c1 > 0.0 && std::abs(c1 - std::sin(c2 / 2.0)) <= 1e-12 && c1 < c2 &&
         c2 < oscillatory_c2_bound();
}

VorticityModel::VorticityModel(VorticityKind kind, double delta, std::string name)
    : kind_(kind), delta_(delta), name_(std::move(name)) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("vorticity model: delta must be a positive finite number");
  }
}

VorticityModel VorticityModel::classical(double delta) {
  VorticityModel m(VorticityKind::Classical, delta, "classical");
  m.certify(std::sqrt(delta) + 0.5);
  return m;
}

VorticityModel VorticityModel::oscillatory(double c1, double c2, double delta) {
  if (!validate_oscillatory_constants(c1, c2)) {
    std::ostringstream msg;
    msg << "oscillatory model: constants violate 0 < c1 = sin(c2/2) < c2 < "
        << format_real(oscillatory_c2_bound()) << " (c1 = " << format_real(c1)
        << ", c2 = " << format_real(c2) << ")";
    throw DomainError(msg.str());
  }
  VorticityModel m(VorticityKind::Oscillatory, delta, "oscillatory");
  m.constants_ = OscillatoryConstants{c1, c2};
  m.certify(std::nullopt);
  return m;
}

VorticityModel VorticityModel::custom(VorticityFn fn, double delta, std::optional<double> holder_C,
                                      std::string name) {
  if (!fn) throw DomainError("custom vorticity model: empty evaluator");
  if (holder_C && !(*holder_C > 0.0)) {
    throw DomainError("custom vorticity model: holder_C must be positive");
  }
  VorticityModel m(VorticityKind::Custom, delta, std::move(name));
  m.custom_ = std::move(fn);
  m.certify(holder_C);
  return m;
}

void VorticityModel::certify(std::optional<double> holder_C) {
  HypothesisReport sign = check_sign_condition(*this, kDefaultSignSamples);
  const double sup = estimate_holder_constant(*this, kDefaultHolderPairs);
  if (holder_C) {
    holder_C_ = *holder_C;
  } else {
    holder_C_ = std::max(kHolderSafetyFactor * sup, std::numeric_limits<double>::min());
  }
  report_ = sign;
  report_.holder_sup = sup;
  report_.holder_C = holder_C_;
  report_.verdict = sign.verdict && sup <= holder_C_;
}

double VorticityModel::operator()(double psi) const {
  if (!std::isfinite(psi)) throw DomainError("vorticity: non-finite argument");
  switch (kind_) {
    case VorticityKind::Classical:
      return classical_law(psi);
    case VorticityKind::Oscillatory:
      return oscillatory_law(psi, constants_->c1, constants_->c2);
    case VorticityKind::Custom:
      return custom_(psi);
  }
  return 0.0;
}

double eval(const VorticityModel& model, double psi) { return model(psi); }

HypothesisReport check_sign_condition(const VorticityModel& model, std::size_t n_samples) {
  if (n_samples < 2) throw DomainError("check_sign_condition: need at least 2 samples");
  const double delta = model.delta();
  const std::size_t n_pos = (n_samples + 1) / 2;
  const std::size_t n_neg = n_samples - n_pos;

  HypothesisReport report;
  report.sign_margin = std::numeric_limits<double>::infinity();
  bool ok = model(0.0) == 0.0;

  auto sweep = [&](std::size_t count, double side) {
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      const double psi = side * log_spaced(delta, t);
      const double product = psi * model(psi);
      report.sign_margin = std::min(report.sign_margin, -product);
      if (!(product < 0.0)) ok = false;
    }
  };
  sweep(n_pos, 1.0);
  sweep(n_neg, -1.0);

  report.samples_used = n_samples;
  report.holder_C = model.holder_C();
  report.verdict = ok && report.sign_margin > 0.0;
  return report;
}

double estimate_holder_constant(const VorticityModel& model, std::size_t n_pairs) {
  if (n_pairs < 1) throw DomainError("estimate_holder_constant: need at least one pair");
  const double delta = model.delta();
  std::mt19937_64 gen(kHolderSeed);
  double sup = 0.0;

  for (std::size_t k = 0; k < n_pairs; ++k) {
    const double side = (k % 2 == 0) ? 1.0 : -1.0;
    const double a = log_spaced(delta, unit_draw(gen));
    double b;
    if ((k / 2) % 2 == 0) {
      // near-diagonal pair: the sup is approached as b -> a -> 0
      const double sep = std::pow(10.0, std::log10(kMinRelSeparation) * unit_draw(gen));
      b = a * (1.0 + sep);
      if (b > delta) b = a / (1.0 + sep);
    } else {
      b = log_spaced(delta, unit_draw(gen));
    }
    if (a == b) continue;
    const double fa = model(side * a);
    const double fb = model(side * b);
    const double q = std::abs(fa - fb) * std::sqrt(std::min(a, b)) / std::abs(a - b);
    if (std::isfinite(q)) sup = std::max(sup, q);
  }
  return sup;
}

HypothesisReport validate_hypotheses(const VorticityModel& model, std::size_t n_samples,
                                     std::size_t n_pairs) {
  HypothesisReport report = check_sign_condition(model, n_samples);
  report.holder_sup = estimate_holder_constant(model, n_pairs);
  report.holder_C = model.holder_C();
  report.verdict = report.verdict && report.holder_sup <= report.holder_C;
  return report;
}

std::string to_key_value(const HypothesisReport& report) {
  std::ostringstream out;
  out << "sign_margin = " << format_real(report.sign_margin) << '\n'
      << "holder_sup = " << format_real(report.holder_sup) << '\n'
      << "holder_C = " << format_real(report.holder_C) << '\n'
      << "samples_used = " << report.samples_used << '\n'
      << "verdict = " << (report.verdict ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace vflow
