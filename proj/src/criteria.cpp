#include "stable_ergo/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stable_ergo/errors.hpp"

namespace stable_ergo {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

Verdict finite_verdict(const std::optional<CriterionValue>& c) {
  if (!c) return Verdict::unknown;
  return c->finite() ? Verdict::yes : Verdict::no;
}

nlohmann::json criterion_json(const std::optional<CriterionValue>& c) {
  if (!c) return {{"unknown", true}};
  return c->to_json();
}

template <typename F>
std::optional<CriterionValue> guarded(F&& compute, std::vector<std::string>& notes, const char* name) {
  try {
    return compute();
  } catch (const TailUndetermined& err) {
    notes.push_back(std::string(name) + ": " + err.what());
    return std::nullopt;
  }
}

}  // namespace

nlohmann::json optional_rate_json(const std::optional<double>& v, const char* absent_reason) {
  if (v) return *v;
  return {{"absent", true}, {"reason", absent_reason}};
}

nlohmann::json ErgodicityReport::to_json() const {
  return {
      {"alpha", alpha},
      {"ergodic", to_string(ergodic)},
      {"exponentially_ergodic", to_string(exponentially_ergodic)},
      {"strongly_ergodic", to_string(strongly_ergodic)},
      {"mu_total", criterion_json(mu_total)},
      {"delta", criterion_json(delta)},
      {"delta_plus", criterion_json(delta_plus)},
      {"delta_minus", criterion_json(delta_minus)},
      {"I", criterion_json(I)},
      {"notes", notes},
  };
}

bool RateBounds::empty() const {
  return !lambda1_lower && !lambda0_lower && !lambda0_upper && !lambda0_halfline_lower && !kappa_lower;
}

nlohmann::json RateBounds::to_json() const {
  return {
      {"lambda1_lower", optional_rate_json(lambda1_lower, "delta is infinite")},
      {"lambda0_lower", optional_rate_json(lambda0_lower, "delta is infinite")},
      {"lambda0_upper", optional_rate_json(lambda0_upper, "delta_+ or delta_- is infinite")},
      {"lambda0_halfline_lower", optional_rate_json(lambda0_halfline_lower, "delta_+ is infinite")},
      {"kappa_lower", optional_rate_json(kappa_lower, "I is infinite")},
  };
}

ErgodicityReport classify(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  require_alpha(alpha);
  ErgodicityReport r;
  r.alpha = alpha;
  r.mu_total = guarded([&] { return mu_total(profile, alpha, spec); }, r.notes, "mu_total");
  r.delta = guarded([&] { return delta(profile, alpha, spec); }, r.notes, "delta");
  r.delta_plus = guarded([&] { return delta_plus(profile, alpha, spec); }, r.notes, "delta_plus");
  r.delta_minus = guarded([&] { return delta_minus(profile, alpha, spec); }, r.notes, "delta_minus");
  r.I = guarded([&] { return I_integral(profile, alpha, spec); }, r.notes, "I");
  r.ergodic = finite_verdict(r.mu_total);
  r.exponentially_ergodic = finite_verdict(r.delta);
  r.strongly_ergodic = finite_verdict(r.I);
  return r;
}

RateBounds rate_bounds(const ErgodicityReport& report, const AlphaConstants& k) {
  RateBounds b;
  const double omega = k.omega;
  if (report.delta && report.delta->finite()) {
    b.lambda1_lower = 1.0 / (4.0 * omega * report.delta->value);
    b.lambda0_lower = b.lambda1_lower;
  }
  const bool plus = report.delta_plus && report.delta_plus->finite();
  const bool minus = report.delta_minus && report.delta_minus->finite();
  if (plus && minus) {
    b.lambda0_upper = (2.0 / omega) * (1.0 / report.delta_plus->value + 1.0 / report.delta_minus->value);
  }
  if (plus) {
    b.lambda0_halfline_lower = (k.alpha - 1.0) * k.gamma_half * k.gamma_half / (4.0 * report.delta_plus->value);
  }
  if (report.I && report.I->finite()) b.kappa_lower = 1.0 / (omega * report.I->value);
  return b;
}

RateBounds rate_bounds(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  return rate_bounds(classify(profile, alpha, spec), AlphaConstants(alpha));
}

nlohmann::json LyapunovCheck::to_json() const {
  nlohmann::json out = {{"A1", a1},
                        {"exponential_sufficient", exponential_sufficient},
                        {"strong_sufficient", strong_sufficient},
                        {"verdict", verdict}};
  if (a2_gamma) {
    out["A2_gamma"] = *a2_gamma;
    out["A2"] = a2 ? nlohmann::json(*a2) : nlohmann::json(nullptr);
  }
  return out;
}

namespace {

// min over |x| in [1e3, 1e6], both signs, of sigma(x)/|x|^gamma, when the tail
// exponents equal gamma; 0 below and +inf above.
double growth_liminf(const SigmaProfile& profile, const TailAnalysis& tails, double gamma) {
  const double lo = std::min(tails.minus.gamma, tails.plus.gamma);
  if (lo < gamma) return 0.0;
  if (lo > gamma) return std::numeric_limits<double>::infinity();
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 30; ++k) {
    const double x = 1e3 * std::pow(1e3, k / 30.0);
    for (double sign : {-1.0, 1.0}) {
      const SideTail& side = sign > 0 ? tails.plus : tails.minus;
      if (side.gamma == gamma) m = std::min(m, profile(sign * x) / std::pow(x, gamma));
    }
  }
  return m;
}

}  // namespace

LyapunovCheck lyapunov_check(const SigmaProfile& profile, double alpha) {
  require_alpha(alpha);
  const TailAnalysis tails = analyze_tails(profile, alpha);
  LyapunovCheck out;
  out.a1 = growth_liminf(profile, tails, 1.0);
  out.exponential_sufficient = out.a1 > 0.0;
  const double g = std::min(tails.minus.gamma, tails.plus.gamma);
  if (g > 1.0 && std::isfinite(g)) {
    out.a2_gamma = g;
    out.a2 = growth_liminf(profile, tails, g);
    out.strong_sufficient = *out.a2 > 0.0;
  } else if (g > 1.0) {
    // super-polynomial growth satisfies A2 for every gamma
    out.a2_gamma = 2.0;
    out.a2 = std::numeric_limits<double>::infinity();
    out.strong_sufficient = true;
  }
  if (out.strong_sufficient) {
    out.verdict = "sufficient for strong ergodicity";
  } else if (out.exponential_sufficient) {
    out.verdict = "sufficient for exponential ergodicity";
  } else {
    out.verdict = "inconclusive";
  }
  return out;
}

nlohmann::json PolynomialClosedForms::to_json() const {
  return {
      {"gamma", gamma},
      {"alpha", alpha},
      {"delta_plus", delta_plus.to_json()},
      {"delta", delta.to_json()},
      {"mu_total", mu_total.to_json()},
      {"I", I.to_json()},
      {"poly_lambda0_lower", optional_rate_json(lambda0_lower, "gamma < 1")},
      {"poly_lambda0_upper", optional_rate_json(lambda0_upper, "gamma < 1")},
      {"poly_lambda1_lower", optional_rate_json(lambda1_lower, "gamma < 1")},
      {"kappa_lower_poly", optional_rate_json(kappa_lower_poly, "gamma <= 1")},
      {"kappa_lower_from_I", optional_rate_json(kappa_lower_from_I, "gamma <= 1")},
      {"general_bounds", general_bounds.to_json()},
  };
}

PolynomialClosedForms polynomial_closed_forms(double gamma, double alpha) {
  const AlphaConstants k(alpha);
  if (!(gamma > 1.0 / alpha)) {
    std::ostringstream os;
    os << "gamma = " << gamma << " <= 1/alpha: the process is not ergodic";
    throw DomainError(os.str());
  }
  PolynomialClosedForms out;
  out.gamma = gamma;
  out.alpha = alpha;
  const double ag = alpha * gamma;
  out.mu_total.value = 2.0 / (ag - 1.0);
  if (gamma > 1.0) {
    const double e = alpha * (gamma - 1.0);
    out.delta_plus.value = std::pow(alpha - 1.0, alpha - 1.0) * std::pow(e, e) / std::pow(ag - 1.0, ag);
    // d/dx [x^{alpha-1} (1+x)^{1-ag}] = 0 at x = (alpha-1)/e
    out.delta_plus.argsup = (alpha - 1.0) / e;
    out.I.value = 2.0 * detail::beta_function(alpha, e);
  } else if (gamma == 1.0) {
    out.delta_plus.value = 1.0 / (alpha - 1.0);
    out.delta_plus.sup_at_infinity = true;
    out.I = CriterionValue::infinite("I diverges: gamma = 1 needs gamma > 1");
  } else {
    out.delta_plus = CriterionValue::infinite("delta_plus diverges: gamma < 1");
    out.I = CriterionValue::infinite("I diverges: gamma < 1");
  }
  out.delta = out.delta_plus;
  if (out.delta.finite()) out.delta.value *= 2.0;

  if (out.delta_plus.finite()) {
    const double dp = out.delta_plus.value;
    out.lambda0_lower = 1.0 / (8.0 * k.omega * dp);
    out.lambda0_upper = 2.0 / (k.omega * dp);
    out.lambda1_lower = out.lambda0_lower;
  }
  if (gamma > 1.0) {
    out.kappa_lower_poly = alpha * (gamma - 1.0) / (2.0 * k.omega);
    out.kappa_lower_from_I = 1.0 / (k.omega * out.I.value);
  }
  ErgodicityReport exact;
  exact.alpha = alpha;
  exact.mu_total = out.mu_total;
  exact.delta = out.delta;
  exact.delta_plus = out.delta_plus;
  exact.delta_minus = out.delta_plus;
  exact.I = out.I;
  out.general_bounds = rate_bounds(exact, k);
  return out;
}

}  // namespace stable_ergo
