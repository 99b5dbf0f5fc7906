#pragma once

// Green functions of the symmetric alpha-stable process killed on {0}, on
// [-1,1] and on (-inf,0], and the Green operators of the time-changed process
//   U^B f(x) = int_B G^B(x,y) f(y) sigma(y)^{-alpha} dy.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "stable_ergo/errors.hpp"
#include "stable_ergo/quadrature.hpp"
#include "stable_ergo/sigma_profile.hpp"
#include "stable_ergo/special_functions.hpp"

namespace stable_ergo {

/// G^{{0}^c}(x,y) = (omega/2)(|y|^{alpha-1} + |x|^{alpha-1} - |y-x|^{alpha-1}).
/// Zero when either argument is 0.
template <typename Scalar>
Scalar green_punctured(Scalar x, Scalar y, const AlphaConstantsT<Scalar>& k) {
  using std::abs;
  using std::pow;
  if (x == 0 || y == 0) return Scalar(0);
  const Scalar p = k.alpha - 1;
  return k.omega / 2 * (pow(abs(y), p) + pow(abs(x), p) - pow(abs(y - x), p));
}

/// G^{[-1,1]^c}(x,y) = c_alpha (|x-y|^{alpha-1} h(|xy-1|/|x-y|) - (alpha-1) h(x) h(y)),
/// with the diagonal limit c_alpha (|x^2-1|^{alpha-1}/(alpha-1) - (alpha-1) h(x)^2).
template <typename Scalar>
Scalar green_complement_interval(Scalar x, Scalar y, const AlphaConstantsT<Scalar>& k) {
  using std::abs;
  using std::pow;
  if (!(abs(x) >= 1) || !(abs(y) >= 1)) throw DomainError("green_complement_interval: arguments must satisfy |x|, |y| >= 1");
  if (abs(x) == 1 || abs(y) == 1) return Scalar(0);
  const Scalar a = k.alpha;
  const Scalar hx = harmonic_h(x, a);
  const Scalar hy = harmonic_h(y, a);
  Scalar g;
  if (x == y) {
    g = k.interval_const * (pow(abs(x * x - 1), a - 1) / (a - 1) - (a - 1) * hx * hy);
  } else {
    const Scalar d = abs(x - y);
    g = k.interval_const * (pow(d, a - 1) * harmonic_h(abs(x * y - 1) / d, a) - (a - 1) * hx * hy);
  }
  // cancellation of two O(1) terms near the boundary
  if (g < 0 && g >= Scalar(-1e-12)) g = 0;
  return g;
}

/// G^{(0,inf)}(x,y) = |x-y|^{alpha-1} J_alpha((x min y)/|x-y|) / Gamma(alpha/2)^2,
/// with the diagonal limit x^{alpha-1} / ((alpha-1) Gamma(alpha/2)^2).
template <typename Scalar>
Scalar green_halfline(Scalar x, Scalar y, const AlphaConstantsT<Scalar>& k) {
  using std::abs;
  using std::pow;
  if (!(x > 0) || !(y > 0)) throw DomainError("green_halfline: arguments must be positive");
  const Scalar g2 = k.gamma_half * k.gamma_half;
  if (x == y) return pow(x, k.alpha - 1) / ((k.alpha - 1) * g2);
  const Scalar d = abs(x - y);
  return pow(d, k.alpha - 1) * j_alpha(std::min(x, y) / d, k.alpha) / g2;
}

/// (x min y)^{alpha-1} / ((alpha-1) Gamma(alpha/2)^2), the pointwise majorant of
/// green_halfline whose Green operator has the nested closed form of II^+.
template <typename Scalar>
Scalar green_halfline_majorant(Scalar x, Scalar y, const AlphaConstantsT<Scalar>& k) {
  if (!(x > 0) || !(y > 0)) return Scalar(0);
  return std::pow(std::min(x, y), k.alpha - 1) / ((k.alpha - 1) * k.gamma_half * k.gamma_half);
}

inline double green_punctured(double x, double y, double alpha) {
  return green_punctured(x, y, AlphaConstants(alpha));
}
inline double green_complement_interval(double x, double y, double alpha) {
  return green_complement_interval(x, y, AlphaConstants(alpha));
}
inline double green_halfline(double x, double y, double alpha) { return green_halfline(x, y, AlphaConstants(alpha)); }

/// Row of a kernel against a fixed y, e.g. green_punctured(xs, 2.0, k).
template <typename Derived, typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> green_punctured(const Eigen::ArrayBase<Derived>& xs, Scalar y,
                                                         const AlphaConstantsT<Scalar>& k) {
  return xs.derived().unaryExpr([&](Scalar x) { return green_punctured(x, y, k); });
}
template <typename Derived, typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> green_complement_interval(const Eigen::ArrayBase<Derived>& xs, Scalar y,
                                                                   const AlphaConstantsT<Scalar>& k) {
  return xs.derived().unaryExpr([&](Scalar x) { return green_complement_interval(x, y, k); });
}
template <typename Derived, typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> green_halfline(const Eigen::ArrayBase<Derived>& xs, Scalar y,
                                                        const AlphaConstantsT<Scalar>& k) {
  return xs.derived().unaryExpr([&](Scalar x) { return green_halfline(x, y, k); });
}

enum class KillingSet { point_zero, unit_interval, negative_halfline };

const char* to_string(KillingSet b);
KillingSet killing_set_from_string(const std::string& name);  // punctured | interval-complement | halfline

/// One of the three killed Green kernels, or the half-line majorant.
struct GreenKernel {
  enum class Kind { punctured, interval_complement, halfline, halfline_majorant };

  Kind kind;
  AlphaConstants constants;

  GreenKernel(Kind kind_, const AlphaConstants& k) : kind(kind_), constants(k) {}
  static GreenKernel for_domain(KillingSet b, const AlphaConstants& k);

  /// Kernel value; 0 when either argument lies in the killing set.
  double operator()(double x, double y) const;
  bool in_domain(double x) const;
  /// Open intervals making up the domain, (lo, hi) with +-infinity allowed.
  std::vector<std::pair<double, double>> domain_pieces() const;
  /// Growth exponent of y -> G(x,y) as |y| -> infinity at fixed x.
  double growth_exponent() const;
};

/// A test function together with the power-law growth |f(y)| = O(|y|^growth)
/// used for the tail closure.
struct TestFunction {
  std::function<double(double)> eval;
  double growth = 0.0;
};

/// U^B f(x) by adaptive quadrature split at the kink y = x, the killing
/// boundary and +-1, with a power-law tail closure. Throws IntegralDiverged
/// when the integrand decays no faster than |y|^{-1}.
double green_apply(const GreenKernel& kernel, const SigmaProfile& profile, const TestFunction& f, double x,
                   const QuadratureSpec& spec = {});

/// II(f)(x) = U^{(0)}f(x) / f(x); f defaults to sqrt(h0), h0 = (omega/2)|x|^{alpha-1}.
/// Throws PreconditionError when f(0) != 0.
double ii_operator(const SigmaProfile& profile, const AlphaConstants& k, double x,
                   const std::optional<TestFunction>& f = std::nullopt, const QuadratureSpec& spec = {});

/// II^+(phi)(x) with phi(x) = x^{(alpha-1)/2}, through the nested form
///   (1/(Gamma(alpha/2)^2 phi(x))) int_0^x z^{alpha-2} int_z^inf phi sigma^{-alpha} dz.
double ii_plus_operator(const SigmaProfile& profile, const AlphaConstants& k, double x, const QuadratureSpec& spec = {});

/// The same quantity through green_apply with the half-line majorant kernel.
double ii_plus_operator_kernel_route(const SigmaProfile& profile, const AlphaConstants& k, double x,
                                     const QuadratureSpec& spec = {});

/// Bound on sup_x E_x[hitting time of 0].
struct MeanExitBound {
  double analytic = 0.0;  // omega I
  double grid_sup = 0.0;  // max of U^{(0)}1 over the sample grid
  double argsup = 0.0;
};

/// Throws IntegralDiverged when I is infinite.
MeanExitBound mean_exit_bound(const SigmaProfile& profile, const AlphaConstants& k, const QuadratureSpec& spec = {});

/// sqrt(h0(x)) with h0(x) = (omega/2)|x|^{alpha-1}, the default II test function.
double sqrt_h0(double x, const AlphaConstants& k);

}  // namespace stable_ergo
