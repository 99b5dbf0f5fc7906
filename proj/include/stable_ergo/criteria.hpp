#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stable_ergo/measure.hpp"
#include "stable_ergo/sigma_profile.hpp"
#include "stable_ergo/special_functions.hpp"

namespace stable_ergo {

enum class Verdict { yes, no, unknown };

const char* to_string(Verdict v);

/// Finiteness of mu(R), delta and I decides ergodicity, exponential ergodicity
/// and strong ergodicity. A criterion whose tail could not be determined is
/// left empty and the matching verdict is unknown.
struct ErgodicityReport {
  double alpha = 0.0;
  Verdict ergodic = Verdict::unknown;
  Verdict exponentially_ergodic = Verdict::unknown;
  Verdict strongly_ergodic = Verdict::unknown;
  std::optional<CriterionValue> mu_total;
  std::optional<CriterionValue> delta;
  std::optional<CriterionValue> delta_plus;
  std::optional<CriterionValue> delta_minus;
  std::optional<CriterionValue> I;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

/// Rates (1/time). A bound is absent when its governing criterion is infinite
/// or unknown.
struct RateBounds {
  std::optional<double> lambda1_lower;           // 1/(4 omega delta)
  std::optional<double> lambda0_lower;           // 1/(4 omega delta)
  std::optional<double> lambda0_upper;           // (2/omega)(1/delta_+ + 1/delta_-)
  std::optional<double> lambda0_halfline_lower;  // (alpha-1) Gamma(alpha/2)^2 / (4 delta_+)
  std::optional<double> kappa_lower;             // 1/(omega I)

  bool empty() const;
  nlohmann::json to_json() const;
};

ErgodicityReport classify(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

RateBounds rate_bounds(const ErgodicityReport& report, const AlphaConstants& constants);
RateBounds rate_bounds(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

/// Growth conditions sigma(x) >= c|x| (A1) and sigma(x) >= c|x|^gamma, gamma > 1
/// (A2), read off at |x| in [1e3, 1e6]. Each is sufficient only: a failed
/// condition never turns into a negative classification.
struct LyapunovCheck {
  double a1 = 0.0;                // liminf sigma(x)/|x|
  std::optional<double> a2_gamma; // exponent used for A2 (estimated tail exponent, when > 1)
  std::optional<double> a2;       // liminf sigma(x)/|x|^a2_gamma
  bool exponential_sufficient = false;
  bool strong_sufficient = false;
  std::string verdict;

  nlohmann::json to_json() const;
};

LyapunovCheck lyapunov_check(const SigmaProfile& profile, double alpha);

/// Exact values for sigma(x) = (1+|x|)^gamma.
struct PolynomialClosedForms {
  double gamma = 0.0;
  double alpha = 0.0;
  CriterionValue delta_plus;
  CriterionValue delta;
  CriterionValue mu_total;
  CriterionValue I;
  // lambda_0 sandwich [1/(8 omega delta_+), 2/(omega delta_+)] specific to polynomial profiles
  std::optional<double> lambda0_lower;
  std::optional<double> lambda0_upper;
  std::optional<double> lambda1_lower;
  std::optional<double> kappa_lower_poly;  // alpha(gamma-1)/(2 omega), gamma > 1
  std::optional<double> kappa_lower_from_I;    // 1/(omega I), gamma > 1
  RateBounds general_bounds;                    // the general bounds fed with exact criteria

  nlohmann::json to_json() const;
};

/// Throws DomainError when gamma <= 1/alpha (not ergodic).
PolynomialClosedForms polynomial_closed_forms(double gamma, double alpha);

/// {"infinite": true, "reason": ...} or the plain number.
nlohmann::json optional_rate_json(const std::optional<double>& v, const char* absent_reason);

}  // namespace stable_ergo
