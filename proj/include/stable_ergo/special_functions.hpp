#pragma once

// Constants of the symmetric alpha-stable process on the line and the special
// functions that enter its killed Green kernels. Everything is templated on the
// floating-point type; the Lanczos coefficients cap accuracy at ~1e-15.

#include <cmath>
#include <numbers>

#include "stable_ergo/errors.hpp"
#include "stable_ergo/quadrature.hpp"

namespace stable_ergo {

template <typename Scalar>
Scalar lanczos_gamma(Scalar x) {
  using std::cos;
  using std::exp;
  using std::pow;
  using std::sin;
  using std::sqrt;
  constexpr double pi = std::numbers::pi;
  // g = 7, n = 9
  static constexpr double kCoeff[9] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                       771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                       -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < Scalar(0.5)) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return Scalar(pi) / (sin(Scalar(pi) * x) * lanczos_gamma<Scalar>(Scalar(1) - x));
  }
  const Scalar z = x - 1;
  Scalar sum = Scalar(kCoeff[0]);
  for (int i = 1; i < 9; ++i) sum += Scalar(kCoeff[i]) / (z + Scalar(i));
  const Scalar t = z + Scalar(7.5);
  return sqrt(Scalar(2 * pi)) * pow(t, z + Scalar(0.5)) * exp(-t) * sum;
}

template <typename Scalar>
void require_alpha(Scalar alpha) {
  if (!(alpha > Scalar(1) && alpha < Scalar(2))) throw AlphaOutOfRange(static_cast<double>(alpha));
}

/// omega_alpha = -1 / (cos(pi alpha / 2) Gamma(alpha)).
template <typename Scalar>
Scalar omega_alpha(Scalar alpha) {
  require_alpha(alpha);
  return Scalar(-1) / (std::cos(Scalar(std::numbers::pi) * alpha / 2) * lanczos_gamma(alpha));
}

/// Jump-kernel constant of the fractional Laplacian, C_alpha |x-y|^{-1-alpha}.
template <typename Scalar>
Scalar frac_kernel_constant(Scalar alpha) {
  require_alpha(alpha);
  return alpha * std::pow(Scalar(2), alpha - 1) * lanczos_gamma((alpha + 1) / 2) /
         (std::sqrt(Scalar(std::numbers::pi)) * lanczos_gamma(Scalar(1) - alpha / 2));
}

/// Prefactor of the Green kernel killed on [-1,1]: 2^{1-alpha} / Gamma(alpha/2)^2.
template <typename Scalar>
Scalar interval_green_constant(Scalar alpha) {
  require_alpha(alpha);
  const Scalar g = lanczos_gamma(alpha / 2);
  return std::pow(Scalar(2), Scalar(1) - alpha) / (g * g);
}

namespace detail {

// s^a sum_k (1-b)_k / k! s^k / (a+k): the lower incomplete beta integral
// int_0^s v^{a-1} (1-v)^{b-1} dv for 0 <= s < 1, and its analytic continuation
// to negative non-integer a.
template <typename Scalar>
Scalar incomplete_beta_series(Scalar s, Scalar a, Scalar b) {
  using std::abs;
  if (s == 0) return Scalar(0);
  Scalar coeff = 1;
  Scalar sum = 1 / a;
  Scalar power = 1;
  for (int k = 1; k < 2000; ++k) {
    coeff *= (Scalar(k) - b) / Scalar(k);
    power *= s;
    const Scalar term = coeff * power / (a + Scalar(k));
    sum += term;
    if (abs(term) <= std::numeric_limits<Scalar>::epsilon() * abs(sum) / 4) break;
  }
  return std::pow(s, a) * sum;
}

template <typename Scalar>
Scalar beta_function(Scalar a, Scalar b) {
  return lanczos_gamma(a) * lanczos_gamma(b) / lanczos_gamma(a + b);
}

}  // namespace detail

/// h(x) = int_1^{|x|} (z^2 - 1)^{alpha/2 - 1} dz, the harmonic function of the
/// process killed on [-1,1]. With w = z^{-2} this is half an incomplete beta
/// integral, evaluated from whichever end converges fastest.
template <typename Scalar>
Scalar harmonic_h(Scalar x, Scalar alpha) {
  using std::abs;
  require_alpha(alpha);
  const Scalar ax = abs(x);
  if (!(ax >= 1)) throw DomainError("harmonic_h: |x| must be at least 1");
  if (ax == 1) return Scalar(0);
  const Scalar b = alpha / 2;
  const Scalar a = (Scalar(1) - alpha) / 2;
  const Scalar t = Scalar(1) / (ax * ax);
  if (ax <= 2) return detail::incomplete_beta_series(Scalar(1) - t, b, a) / 2;
  return (detail::beta_function(a, b) - detail::incomplete_beta_series(t, a, b)) / 2;
}

/// h'(x) for |x| > 1 (derivative in |x|).
template <typename Scalar>
Scalar harmonic_h_derivative(Scalar x, Scalar alpha) {
  const Scalar ax = std::abs(x);
  return std::pow(ax * ax - 1, alpha / 2 - 1);
}

/// J_alpha(t) = int_0^t [s(s+1)]^{alpha/2 - 1} ds. The map v = s/(1+s) turns it
/// into the incomplete beta B_v(alpha/2, 1 - alpha).
template <typename Scalar>
Scalar j_alpha(Scalar t, Scalar alpha) {
  require_alpha(alpha);
  if (!(t >= 0)) throw DomainError("J_alpha: argument must be nonnegative");
  if (t == 0) return Scalar(0);
  if (std::isinf(static_cast<double>(t))) return std::numeric_limits<Scalar>::infinity();
  const Scalar a = alpha / 2;
  const Scalar b = Scalar(1) - alpha;
  if (t <= 1) return detail::incomplete_beta_series(t / (1 + t), a, b);
  const Scalar u = 1 / (1 + t);
  return detail::beta_function(a, b) - detail::incomplete_beta_series(u, b, a);
}

/// K_alpha, the limit constant G^{[-1,1]^c}(x, y) -> K_alpha h(x) as y -> infinity.
/// The integral is resolved to V = 1e8 and the remainder closed with the
/// two-term tail v^{alpha-3} (1 - 1/v).
template <typename Scalar>
Scalar k_alpha(Scalar alpha) {
  using std::pow;
  require_alpha(alpha);
  const Scalar beta = alpha / 2 - 1;
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  // v = 1 + u^{2/alpha} on [1, 2] makes the integrand smooth at v = 1
  auto near = [&](Scalar u) {
    const Scalar v = 1 + pow(u, 2 / alpha);
    return (2 / alpha) * pow(v + 1, beta) / (1 + v);
  };
  // log-variable on [2, V]
  const Scalar V = 1e8;
  auto far = [&](Scalar s) {
    const Scalar v = std::exp(s);
    return pow(v * v - 1, beta) / (1 + v) * v;
  };
  Scalar integral = gauss_kronrod<Scalar>(near, Scalar(0), Scalar(1), spec).value;
  integral += gauss_kronrod<Scalar>(far, std::log(Scalar(2)), std::log(V), spec).value;
  integral += pow(V, alpha - 2) / (2 - alpha) - pow(V, alpha - 3) / (3 - alpha);
  const Scalar prefactor =
      2 * interval_green_constant(alpha) * (1 - alpha / 2) * lanczos_gamma(alpha / 2) / lanczos_gamma(1 - alpha / 2);
  return prefactor * integral;
}

/// The alpha-dependent constants bundled once per computation.
template <typename Scalar>
struct AlphaConstantsT {
  Scalar alpha;
  Scalar omega;           // omega_alpha
  Scalar kernel_const;    // C_alpha
  Scalar interval_const;  // c_alpha
  Scalar gamma_half;      // Gamma(alpha/2)

  explicit AlphaConstantsT(Scalar a)
      : alpha(a),
        omega(omega_alpha(a)),
        kernel_const(frac_kernel_constant(a)),
        interval_const(interval_green_constant(a)),
        gamma_half(lanczos_gamma(a / 2)) {}

  // Not cached: needs a quadrature.
  Scalar k_alpha() const { return stable_ergo::k_alpha(alpha); }
};

using AlphaConstants = AlphaConstantsT<double>;

}  // namespace stable_ergo
