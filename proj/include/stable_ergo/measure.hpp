#pragma once

#include <limits>
#include <optional>
#include <string>

#include <json.hpp>

#include "stable_ergo/quadrature.hpp"
#include "stable_ergo/sigma_profile.hpp"

namespace stable_ergo {

/// A nonnegative criterion value that may be +infinity. Divergence is decided
/// from tail exponents, so an infinite value always carries its reason.
struct CriterionValue {
  double value = 0.0;
  std::optional<double> argsup;
  // True when the supremum is approached only as x -> infinity.
  bool sup_at_infinity = false;
  double abs_error = 0.0;
  std::string divergence_reason;

  static CriterionValue infinite(std::string reason) {
    CriterionValue v;
    v.value = std::numeric_limits<double>::infinity();
    v.divergence_reason = std::move(reason);
    return v;
  }

  bool finite() const { return divergence_reason.empty(); }
  nlohmann::json to_json() const;
};

/// Power-law description of one tail of sigma: sigma(x) ~ coeff |x|^gamma.
struct SideTail {
  double gamma = 0.0;
  double coeff = 1.0;
};

struct TailAnalysis {
  SideTail minus;
  SideTail plus;
  bool declared = false;
};

/// Tail exponents of sigma. Declared for polynomial and tabulated profiles;
/// otherwise the least-squares slope of log sigma against log|x| over
/// [1e3, 1e6], accepted when the two halves of that range agree to 1e-3.
/// Super-polynomial growth gives +infinity, super-polynomial decay -infinity.
/// Throws TailUndetermined when the halves disagree.
TailExponents estimate_tail_exponent(const SigmaProfile& profile);

/// Exponents and leading coefficients used for divergence decisions. Estimated
/// exponents within kTailSnapBand of a criterion threshold (1/alpha or 1) are
/// set to the threshold.
TailAnalysis analyze_tails(const SigmaProfile& profile, double alpha);

inline constexpr double kTailSnapBand = 2e-3;

/// mu(R) = int sigma^{-alpha} dx.
CriterionValue mu_total(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

/// mu(R \ (-y, y)) for y >= 0.
CriterionValue tail_mass(const SigmaProfile& profile, double alpha, double y, const QuadratureSpec& spec = {});

/// delta_+ = sup_{x>0} x^{alpha-1} int_x^inf sigma^{-alpha}; delta_- mirrors it.
CriterionValue delta_plus(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});
CriterionValue delta_minus(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

/// delta = sup_{x>0} x^{alpha-1} mu(R \ (-x, x)), evaluated directly.
CriterionValue delta(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

/// I = int sigma^{-alpha} |x|^{alpha-1} dx.
CriterionValue I_integral(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

}  // namespace stable_ergo
