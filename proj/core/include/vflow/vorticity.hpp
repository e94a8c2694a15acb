#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace vflow {

enum class VorticityKind { Classical, Oscillatory, Custom };

struct OscillatoryConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

using VorticityFn = std::function<double(double)>;

// Outcome of checking f(0) = 0, psi * f(psi) < 0 and the inverse-square-root
// Hoelder bound on [-delta, 0) U (0, delta].
struct HypothesisReport {
  double sign_margin = 0.0;  // min of -psi * f(psi) over the samples
  double holder_sup = 0.0;   // empirical sup of |f(a)-f(b)| sqrt(min(|a|,|b|)) / |a-b|
  double holder_C = 0.0;
  std::size_t samples_used = 0;
  bool verdict = false;
};

/// Upper bound on c2 for the oscillatory law, (3 - 2 sqrt 2) / (4 + 3 sqrt 2),
/// evaluated in the cancellation-free form (17 sqrt 2 - 24) / 2.
double oscillatory_c2_bound();

/// True iff 0 < c1, |c1 - sin(c2/2)| <= 1e-12, c1 < c2 and c2 < oscillatory_c2_bound().
bool validate_oscillatory_constants(double c1, double c2);

/// A vorticity law f together with the neighbourhood half-width delta and the
/// Hoelder constant C it has been certified for.
///
/// The factories run the hypothesis validators on construction. A model that
/// fails them is still usable for inspection, but solvers reject it unless the
/// caller opts in with allow_unvalidated.
class VorticityModel {
 public:
  static constexpr std::size_t kDefaultSignSamples = 2000;
  static constexpr std::size_t kDefaultHolderPairs = 100000;
  static constexpr double kHolderSafetyFactor = 1.25;

  /// f(psi) = psi - psi / sqrt|psi|. holder_C = sqrt(delta) + 1/2.
  static VorticityModel classical(double delta = 0.25);

  /// f(psi) = psi - psi / sqrt|psi| * [1 + c1 - sin(c2 psi^2 / (psi^2 + 1))].
  /// Throws DomainError unless validate_oscillatory_constants(c1, c2).
  static VorticityModel oscillatory(double c1, double c2, double delta = 0.25);

  /// User-supplied law. Without an explicit holder_C the constant is the
  /// empirical sup times kHolderSafetyFactor.
  static VorticityModel custom(VorticityFn fn, double delta,
                               std::optional<double> holder_C = std::nullopt,
                               std::string name = "custom");

  double operator()(double psi) const;

  VorticityKind kind() const noexcept { return kind_; }
  double delta() const noexcept { return delta_; }
  double holder_C() const noexcept { return holder_C_; }
  bool validated() const noexcept { return report_.verdict; }
  const HypothesisReport& hypotheses() const noexcept { return report_; }
  const std::optional<OscillatoryConstants>& constants() const noexcept { return constants_; }
  const std::string& name() const noexcept { return name_; }

 private:
  VorticityModel(VorticityKind kind, double delta, std::string name);
  void certify(std::optional<double> holder_C);

  VorticityKind kind_;
  double delta_;
  double holder_C_ = 0.0;
  std::optional<OscillatoryConstants> constants_;
  VorticityFn custom_;
  std::string name_;
  HypothesisReport report_;
};

/// f(psi). Throws DomainError for non-finite psi.
double eval(const VorticityModel& model, double psi);

/// Samples a symmetric log-spaced grid accumulating at 0 (n_samples points in
/// total) and checks f(0) = 0 and psi * f(psi) < 0. Only the sign part of the
/// report is filled; holder_sup is left at 0.
HypothesisReport check_sign_condition(const VorticityModel& model, std::size_t n_samples);

/// Empirical sup of the Hoelder quotient over n_pairs deterministic same-sign
/// pairs in the model's neighbourhood. Pairs closer than a relative separation
/// of 1e-6 are not drawn, which keeps the difference quotient free of
/// cancellation noise.
double estimate_holder_constant(const VorticityModel& model, std::size_t n_pairs);

/// Both validators, combined with the model's holder_C.
HypothesisReport validate_hypotheses(const VorticityModel& model, std::size_t n_samples,
                                     std::size_t n_pairs);

/// `key = value` lines: sign_margin, holder_sup, holder_C, samples_used, verdict.
std::string to_key_value(const HypothesisReport& report);

}  // namespace vflow
