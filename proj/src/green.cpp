#include "stable_ergo/green.hpp"

#include <limits>
#include <sstream>

#include "stable_ergo/measure.hpp"
#include "stable_ergo/parallel.hpp"

namespace stable_ergo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* to_string(KillingSet b) {
  switch (b) {
    case KillingSet::point_zero: return "punctured";
    case KillingSet::unit_interval: return "interval-complement";
    case KillingSet::negative_halfline: return "halfline";
  }
  return "punctured";
}

KillingSet killing_set_from_string(const std::string& name) {
  if (name == "punctured") return KillingSet::point_zero;
  if (name == "interval-complement") return KillingSet::unit_interval;
  if (name == "halfline") return KillingSet::negative_halfline;
  throw DomainError("unknown domain '" + name + "' (expected punctured, interval-complement or halfline)");
}

GreenKernel GreenKernel::for_domain(KillingSet b, const AlphaConstants& k) {
  switch (b) {
    case KillingSet::point_zero: return {Kind::punctured, k};
    case KillingSet::unit_interval: return {Kind::interval_complement, k};
    case KillingSet::negative_halfline: return {Kind::halfline, k};
  }
  return {Kind::punctured, k};
}

bool GreenKernel::in_domain(double x) const {
  switch (kind) {
    case Kind::punctured: return x != 0.0;
    case Kind::interval_complement: return std::abs(x) > 1.0;
    case Kind::halfline:
    case Kind::halfline_majorant: return x > 0.0;
  }
  return false;
}

double GreenKernel::operator()(double x, double y) const {
  if (!in_domain(x) || !in_domain(y)) return 0.0;
  switch (kind) {
    case Kind::punctured: return green_punctured(x, y, constants);
    case Kind::interval_complement: return green_complement_interval(x, y, constants);
    case Kind::halfline: return green_halfline(x, y, constants);
    case Kind::halfline_majorant: return green_halfline_majorant(x, y, constants);
  }
  return 0.0;
}

std::vector<std::pair<double, double>> GreenKernel::domain_pieces() const {
  switch (kind) {
    case Kind::punctured: return {{-kInf, 0.0}, {0.0, kInf}};
    case Kind::interval_complement: return {{-kInf, -1.0}, {1.0, kInf}};
    case Kind::halfline:
    case Kind::halfline_majorant: return {{0.0, kInf}};
  }
  return {};
}

double GreenKernel::growth_exponent() const {
  // punctured and interval kernels tend to a constant in y; the half-line
  // kernel decays like y^{alpha/2 - 1}
  return kind == Kind::halfline ? constants.alpha / 2 - 1 : 0.0;
}

double green_apply(const GreenKernel& kernel, const SigmaProfile& profile, const TestFunction& f, double x,
                   const QuadratureSpec& spec) {
  spec.validate();
  if (!kernel.in_domain(x)) throw DomainError("green_apply: x lies in the killing set");
  const double alpha = kernel.constants.alpha;
  const TailAnalysis tails = analyze_tails(profile, alpha);
  double total = 0.0;
  for (const auto& [lo, hi] : kernel.domain_pieces()) {
    // every piece is a half-line; write it as {sign * z : z > a}
    const double sign = std::isinf(hi) ? 1.0 : -1.0;
    const double a = sign > 0 ? lo : -hi;
    const SideTail side = sign > 0 ? tails.plus : tails.minus;
    const double decay = alpha * side.gamma - kernel.growth_exponent() - f.growth;
    if (!(decay > 1.0)) {
      std::ostringstream os;
      os << "U f(" << x << ") diverges: integrand decays like |y|^-" << decay << " at "
         << (sign > 0 ? "+" : "-") << "infinity";
      throw IntegralDiverged(os.str());
    }
    auto integrand = [&](double z) {
      const double y = sign * z;
      const double g = kernel(x, y);
      if (g == 0.0) return 0.0;
      const double fy = f.eval(y);
      if (fy == 0.0) return 0.0;
      return g * fy * profile.speed_density(y, alpha);
    };
    std::vector<double> points = {a};
    const double zx = sign * x;
    if (zx > a) points.push_back(zx);
    if (1.0 > a && zx != 1.0) points.push_back(1.0);
    std::sort(points.begin(), points.end());
    const double cut = 2.0 * std::max({a, std::abs(x), 1.0});
    points.push_back(cut);
    auto r = integrate_pieces<double>(integrand, points, spec);
    r += integrate_upper_tail<double>(integrand, cut, decay, spec);
    total += r.value;
  }
  return total;
}

double sqrt_h0(double x, const AlphaConstants& k) {
  return std::sqrt(k.omega / 2 * std::pow(std::abs(x), k.alpha - 1));
}

double ii_operator(const SigmaProfile& profile, const AlphaConstants& k, double x, const std::optional<TestFunction>& f,
                   const QuadratureSpec& spec) {
  if (x == 0.0) throw DomainError("ii_operator: x must be nonzero");
  const TestFunction test = f ? *f : TestFunction{[k](double y) { return sqrt_h0(y, k); }, (k.alpha - 1) / 2};
  const double f0 = test.eval(0.0);
  if (f0 != 0.0) throw PreconditionError("II test function must vanish at 0, got f(0) = " + std::to_string(f0));
  const double fx = test.eval(x);
  if (!(fx > 0.0)) throw PreconditionError("II test function must be positive off 0");
  return green_apply(GreenKernel(GreenKernel::Kind::punctured, k), profile, test, x, spec) / fx;
}

double ii_plus_operator(const SigmaProfile& profile, const AlphaConstants& k, double x, const QuadratureSpec& spec) {
  if (!(x > 0.0)) throw DomainError("ii_plus_operator: x must be positive");
  spec.validate();
  const double alpha = k.alpha;
  const double half = (alpha - 1) / 2;
  const TailAnalysis tails = analyze_tails(profile, alpha);
  const double decay = alpha * tails.plus.gamma - half;
  if (!(decay > 1.0)) {
    throw IntegralDiverged("II+ diverges: phi sigma^{-alpha} decays like y^-" + std::to_string(decay));
  }
  auto g = [&](double y) { return std::pow(y, half) * profile.speed_density(y, alpha); };
  const double r0 = gauss_kronrod<double>(g, 0.0, 1.0, spec).value + integrate_upper_tail<double>(g, 1.0, decay, spec).value;
  auto tail = [&](double z) {
    if (z <= 1.0) return r0 - gauss_kronrod<double>(g, 0.0, z, spec).value;
    return integrate_upper_tail<double>(g, z, decay, spec).value;
  };
  // z = x u^{1/(alpha-1)} turns int_0^x z^{alpha-2} R(z) dz into x^{alpha-1}/(alpha-1) int_0^1 R du
  auto outer = [&](double u) { return tail(x * std::pow(u, 1.0 / (alpha - 1))); };
  std::vector<double> points = {0.0};
  if (x > 1.0) points.push_back(std::pow(1.0 / x, alpha - 1));
  points.push_back(1.0);
  const double inner = integrate_pieces<double>(outer, points, spec).value;
  const double phi = std::pow(x, half);
  return std::pow(x, alpha - 1) / (alpha - 1) * inner / (k.gamma_half * k.gamma_half * phi);
}

double ii_plus_operator_kernel_route(const SigmaProfile& profile, const AlphaConstants& k, double x,
                                     const QuadratureSpec& spec) {
  if (!(x > 0.0)) throw DomainError("ii_plus_operator: x must be positive");
  const double half = (k.alpha - 1) / 2;
  const TestFunction phi{[half](double y) { return std::pow(std::abs(y), half); }, half};
  return green_apply(GreenKernel(GreenKernel::Kind::halfline_majorant, k), profile, phi, x, spec) / phi.eval(x);
}

MeanExitBound mean_exit_bound(const SigmaProfile& profile, const AlphaConstants& k, const QuadratureSpec& spec) {
  const CriterionValue i = I_integral(profile, k.alpha, spec);
  if (!i.finite()) throw IntegralDiverged("mean exit bound needs a finite I: " + i.divergence_reason);
  MeanExitBound out;
  out.analytic = k.omega * i.value;

  std::vector<double> xs;
  for (int e = -20; e <= 40; ++e) {
    const double x = std::pow(10.0, e / 10.0);
    xs.push_back(-x);
    xs.push_back(x);
  }
  std::vector<double> values(xs.size());
  const GreenKernel kernel(GreenKernel::Kind::punctured, k);
  const TestFunction one{[](double) { return 1.0; }, 0.0};
  parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(xs.size()),
                               [&](std::ptrdiff_t j) { values[j] = green_apply(kernel, profile, one, xs[j], spec); });
  const auto best = std::max_element(values.begin(), values.end());
  out.grid_sup = *best;
  out.argsup = xs[static_cast<std::size_t>(best - values.begin())];
  return out;
}

}  // namespace stable_ergo
