#include "stable_ergo/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "stable_ergo/errors.hpp"
#include "stable_ergo/special_functions.hpp"

namespace stable_ergo {

nlohmann::json CriterionValue::to_json() const {
  if (!finite()) return {{"infinite", true}, {"reason", divergence_reason}};
  nlohmann::json out = {{"value", value}, {"abs_error", abs_error}};
  if (argsup) out["argsup"] = *argsup;
  if (sup_at_infinity) out["sup_at_infinity"] = true;
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailLow = 1e3;
constexpr double kTailHigh = 1e6;
constexpr int kTailSamples = 33;

// sign = +1 for the right tail, -1 for the left one.
struct SampledSide {
  std::vector<double> log_x, log_sigma;
  double special = 0.0;  // +inf on overflow, -inf on underflow, else 0
};

SampledSide sample_side(const SigmaProfile& profile, double sign) {
  SampledSide out;
  for (int k = 0; k < kTailSamples; ++k) {
    const double x = kTailLow * std::pow(kTailHigh / kTailLow, double(k) / (kTailSamples - 1));
    double s = 0.0;
    try {
      s = profile(sign * x);
    } catch (const NonPositiveSigma& err) {
      // underflow of a decaying sigma, not a sign change
      if (err.value() >= 0.0) {
        out.special = -kInf;
        return out;
      }
      throw;
    }
    if (std::isinf(s)) {
      out.special = kInf;
      return out;
    }
    out.log_x.push_back(std::log(x));
    out.log_sigma.push_back(std::log(s));
  }
  return out;
}

double ls_slope(const std::vector<double>& u, const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  const double n = double(hi - lo);
  double su = 0, sv = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    su += u[i];
    sv += v[i];
  }
  const double mu = su / n, mv = sv / n;
  double suu = 0, suv = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  return suv / suu;
}

double estimate_side(const SigmaProfile& profile, double sign) {
  const SampledSide s = sample_side(profile, sign);
  if (s.special != 0.0) return s.special;
  const std::size_t mid = kTailSamples / 2;
  const double near = ls_slope(s.log_x, s.log_sigma, 0, mid + 1);
  const double far = ls_slope(s.log_x, s.log_sigma, mid, kTailSamples);
  if (std::abs(near - far) > 1e-3 * std::max(1.0, std::abs(far))) {
    std::ostringstream os;
    os << "tail exponent at " << (sign > 0 ? "+" : "-") << "infinity did not settle: slopes " << near << " on [1e3,3e4] vs "
       << far << " on [3e4,1e6]";
    throw TailUndetermined(os.str());
  }
  return far;
}

double snap(double gamma, double alpha) {
  if (!std::isfinite(gamma)) return gamma;
  if (std::abs(gamma - 1.0) < kTailSnapBand) return 1.0;
  if (std::abs(gamma - 1.0 / alpha) < kTailSnapBand) return 1.0 / alpha;
  return gamma;
}

const char* side_name(double sign) { return sign > 0 ? "+infinity" : "-infinity"; }

std::string decay_reason(const char* what, double sign, double gamma, const char* condition) {
  std::ostringstream os;
  os << what << " diverges: sigma grows like |x|^" << gamma << " at " << side_name(sign) << " (" << condition << ")";
  return os.str();
}

// Geometric grid on which sup_x x^{alpha-1} T(x) is searched.
constexpr int kSupGridSize = 512;
constexpr double kSupLow = 1e-3;
constexpr double kSupHigh = 1e6;

std::vector<double> sup_grid() {
  std::vector<double> xs(kSupGridSize);
  for (int i = 0; i < kSupGridSize; ++i) {
    xs[i] = kSupLow * std::pow(kSupHigh / kSupLow, double(i) / (kSupGridSize - 1));
  }
  xs.back() = kSupHigh;
  return xs;
}

// Tail mass T(x) = int_x^inf rho(sign z) dz of one side, tabulated backward on
// the sup grid and available at any x > 0 by one extra quadrature.
class SideTailMass {
  struct Density {
    const SigmaProfile* profile;
    double alpha, sign;
    double operator()(double z) const { return profile->speed_density(sign * z, alpha); }
  };
  Density density() const { return {&profile_, alpha_, sign_}; }

 public:
  SideTailMass(const SigmaProfile& profile, double alpha, double sign, double decay_power, const QuadratureSpec& spec)
      : profile_(profile), alpha_(alpha), sign_(sign), q_(decay_power), spec_(spec), xs_(sup_grid()) {
    auto rho = density();
    mass_.resize(xs_.size());
    auto tail = integrate_upper_tail<double>(rho, xs_.back(), q_, spec_);
    mass_.back() = tail.value;
    error_ = tail.abs_error;
    for (int i = kSupGridSize - 2; i >= 0; --i) {
      auto piece = gauss_kronrod<double>(rho, xs_[i], xs_[i + 1], spec_);
      mass_[i] = mass_[i + 1] + piece.value;
      error_ += piece.abs_error;
    }
  }

  const std::vector<double>& grid() const { return xs_; }
  double at_node(std::size_t i) const { return mass_[i]; }
  double abs_error() const { return error_; }

  double at(double x) const {
    auto rho = density();
    if (x >= xs_.back()) return integrate_upper_tail<double>(rho, x, q_, spec_).value;
    if (x < xs_.front()) return mass_.front() + gauss_kronrod<double>(rho, x, xs_.front(), spec_).value;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    return mass_[hi] + gauss_kronrod<double>(rho, x, xs_[hi], spec_).value;
  }

 private:
  const SigmaProfile& profile_;
  double alpha_, sign_, q_;
  QuadratureSpec spec_;
  std::vector<double> xs_;
  std::vector<double> mass_;
  double error_ = 0.0;
};

// sup over x > 0 of s(x), given s on the sup grid; golden-section refinement
// in log x around the best node.
template <typename S>
CriterionValue refine_sup(const std::vector<double>& xs, const std::vector<double>& s_grid, S&& s, double limit_value,
                          double abs_error) {
  const auto best = std::max_element(s_grid.begin(), s_grid.end());
  const std::size_t i = static_cast<std::size_t>(best - s_grid.begin());
  double lo = std::log(xs[i == 0 ? 0 : i - 1]);
  double hi = std::log(xs[std::min(i + 1, xs.size() - 1)]);
  double best_x = xs[i];
  double best_value = *best;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = s(std::exp(c));
  double fd = s(std::exp(d));
  while (hi - lo > 1e-10) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = s(std::exp(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = s(std::exp(d));
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double f_mid = s(std::exp(mid));
  if (f_mid > best_value) {
    best_value = f_mid;
    best_x = std::exp(mid);
  }
  CriterionValue out;
  out.abs_error = abs_error;
  if (limit_value >= best_value) {
    out.value = limit_value;
    out.sup_at_infinity = true;
  } else {
    out.value = best_value;
    out.argsup = best_x;
  }
  return out;
}

// Contribution of one side to lim_{x->inf} x^{alpha-1} T(x); nonzero only at gamma = 1.
double side_limit(const SideTail& tail, double alpha) {
  if (tail.gamma != 1.0) return 0.0;
  return std::pow(tail.coeff, -alpha) / (alpha - 1.0);
}

CriterionValue one_sided_delta(const SigmaProfile& profile, double alpha, double sign, const QuadratureSpec& spec) {
  require_alpha(alpha);
  spec.validate();
  const TailAnalysis tails = analyze_tails(profile, alpha);
  const SideTail side = sign > 0 ? tails.plus : tails.minus;
  const char* name = sign > 0 ? "delta_plus" : "delta_minus";
  if (!(side.gamma >= 1.0)) return CriterionValue::infinite(decay_reason(name, sign, side.gamma, "needs gamma >= 1"));
  SideTailMass mass(profile, alpha, sign, alpha * side.gamma, spec);
  const auto& xs = mass.grid();
  std::vector<double> s_grid(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) s_grid[i] = std::pow(xs[i], alpha - 1.0) * mass.at_node(i);
  auto s = [&](double x) { return std::pow(x, alpha - 1.0) * mass.at(x); };
  return refine_sup(xs, s_grid, s, side_limit(side, alpha), mass.abs_error());
}

}  // namespace

TailExponents estimate_tail_exponent(const SigmaProfile& profile) {
  if (auto declared = profile.declared_tails()) return *declared;
  return {estimate_side(profile, -1.0), estimate_side(profile, 1.0)};
}

TailAnalysis analyze_tails(const SigmaProfile& profile, double alpha) {
  TailAnalysis out;
  if (auto declared = profile.declared_tails()) {
    const auto coeff = profile.declared_tail_coefficients();
    out.minus = {declared->minus, coeff->minus};
    out.plus = {declared->plus, coeff->plus};
    out.declared = true;
    return out;
  }
  const TailExponents raw = estimate_tail_exponent(profile);
  auto make_side = [&](double gamma, double sign) {
    SideTail side{snap(gamma, alpha), 1.0};
    if (std::isfinite(side.gamma)) side.coeff = profile(sign * kTailHigh) / std::pow(kTailHigh, side.gamma);
    return side;
  };
  out.minus = make_side(raw.minus, -1.0);
  out.plus = make_side(raw.plus, 1.0);
  return out;
}

CriterionValue tail_mass(const SigmaProfile& profile, double alpha, double y, const QuadratureSpec& spec) {
  require_alpha(alpha);
  spec.validate();
  if (!(y >= 0.0)) throw DomainError("tail_mass: y must be nonnegative");
  const TailAnalysis tails = analyze_tails(profile, alpha);
  CriterionValue out;
  for (double sign : {-1.0, 1.0}) {
    const SideTail side = sign > 0 ? tails.plus : tails.minus;
    const double q = alpha * side.gamma;
    if (!(q > 1.0)) return CriterionValue::infinite(decay_reason("mu", sign, side.gamma, "needs alpha*gamma > 1"));
    auto rho = [&](double z) { return profile.speed_density(sign * z, alpha); };
    const auto r = integrate_upper_tail<double>(rho, y, q, spec);
    out.value += r.value;
    out.abs_error += r.abs_error;
  }
  return out;
}

CriterionValue mu_total(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  return tail_mass(profile, alpha, 0.0, spec);
}

CriterionValue delta_plus(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  return one_sided_delta(profile, alpha, 1.0, spec);
}

CriterionValue delta_minus(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  return one_sided_delta(profile, alpha, -1.0, spec);
}

CriterionValue delta(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  require_alpha(alpha);
  spec.validate();
  const TailAnalysis tails = analyze_tails(profile, alpha);
  for (double sign : {-1.0, 1.0}) {
    const SideTail side = sign > 0 ? tails.plus : tails.minus;
    if (!(side.gamma >= 1.0)) return CriterionValue::infinite(decay_reason("delta", sign, side.gamma, "needs gamma >= 1"));
  }
  SideTailMass plus(profile, alpha, 1.0, alpha * tails.plus.gamma, spec);
  SideTailMass minus(profile, alpha, -1.0, alpha * tails.minus.gamma, spec);
  const auto& xs = plus.grid();
  std::vector<double> s_grid(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s_grid[i] = std::pow(xs[i], alpha - 1.0) * (plus.at_node(i) + minus.at_node(i));
  }
  auto s = [&](double x) { return std::pow(x, alpha - 1.0) * (plus.at(x) + minus.at(x)); };
  const double limit = side_limit(tails.plus, alpha) + side_limit(tails.minus, alpha);
  return refine_sup(xs, s_grid, s, limit, plus.abs_error() + minus.abs_error());
}

CriterionValue I_integral(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec) {
  require_alpha(alpha);
  spec.validate();
  const TailAnalysis tails = analyze_tails(profile, alpha);
  CriterionValue out;
  for (double sign : {-1.0, 1.0}) {
    const SideTail side = sign > 0 ? tails.plus : tails.minus;
    if (!(side.gamma > 1.0)) return CriterionValue::infinite(decay_reason("I", sign, side.gamma, "needs gamma > 1"));
    auto integrand = [&](double z) { return profile.speed_density(sign * z, alpha) * std::pow(z, alpha - 1.0); };
    auto r = gauss_kronrod<double>(integrand, 0.0, 1.0, spec);
    r += integrate_upper_tail<double>(integrand, 1.0, alpha * side.gamma - (alpha - 1.0), spec);
    out.value += r.value;
    out.abs_error += r.abs_error;
  }
  return out;
}

}  // namespace stable_ergo
