#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace stable_ergo {

struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_panels = 4000;
  // Semi-infinite integrals are resolved numerically up to this radius and
  // closed with a power-law tail beyond it.
  double tail_cut = 1e8;

  void validate() const {
    if (!(rel_tol >= 1e-12) || !(abs_tol >= 0.0) || max_panels < 64 || !(tail_cut > 1.0)) {
      throw std::invalid_argument("QuadratureSpec: need rel_tol >= 1e-12, abs_tol >= 0, max_panels >= 64, tail_cut > 1");
    }
  }
};

template <typename Scalar>
struct QuadratureResult {
  Scalar value{0};
  Scalar abs_error{0};
  int panels = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& other) {
    value += other.value;
    abs_error += other.abs_error;
    panels += other.panels;
    converged = converged && other.converged;
    return *this;
  }
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr double kXgk[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                                    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                                    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                                    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                                    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                                    0.0};
inline constexpr double kWgk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                                    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                                    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                                    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
                                    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                                    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                                  0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                                  0.295524224714752870173892994651338};

template <typename Scalar>
struct Panel {
  Scalar a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> kronrod21(F& f, Scalar a, Scalar b) {
  using std::abs;
  const Scalar center = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  const Scalar fc = f(center);
  Scalar resg = 0;
  Scalar resk = fc * Scalar(kWgk[10]);
  Scalar resabs = abs(resk);
  Scalar fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const Scalar dx = half * Scalar(kXgk[j]);
    const Scalar f1 = f(center - dx);
    const Scalar f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += Scalar(kWgk[j]) * (f1 + f2);
    resabs += Scalar(kWgk[j]) * (abs(f1) + abs(f2));
    if (j % 2 == 1) resg += Scalar(kWg[j / 2]) * (f1 + f2);
  }
  const Scalar reskh = resk / 2;
  Scalar resasc = Scalar(kWgk[10]) * abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += Scalar(kWgk[j]) * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh));
  const Scalar ahalf = abs(half);
  resk *= half;
  resg *= half;
  resabs *= ahalf;
  resasc *= ahalf;
  Scalar err = abs(resk - resg);
  if (resasc != 0 && err != 0) err = resasc * std::min(Scalar(1), std::pow(Scalar(200) * err / resasc, Scalar(1.5)));
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  if (resabs > std::numeric_limits<Scalar>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  return {a, b, resk, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G10/K21) on a finite interval. Panels are
/// bisected in order of decreasing error estimate until the summed estimate
/// meets max(abs_tol, rel_tol * |I|) or the panel budget is spent.
template <typename Scalar, typename F>
QuadratureResult<Scalar> gauss_kronrod(F&& f, Scalar a, Scalar b, const QuadratureSpec& spec = {}) {
  using std::abs;
  QuadratureResult<Scalar> out;
  if (a == b) return out;
  std::priority_queue<detail::Panel<Scalar>> heap;
  auto first = detail::kronrod21<Scalar>(f, a, b);
  Scalar total = first.value;
  Scalar error = first.error;
  heap.push(first);
  int panels = 1;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  while (true) {
    const Scalar target = std::max(Scalar(spec.abs_tol), Scalar(spec.rel_tol) * abs(total));
    if (error <= target) break;
    if (panels >= spec.max_panels) {
      out.converged = false;
      break;
    }
    auto worst = heap.top();
    const Scalar mid = (worst.a + worst.b) / 2;
    if (abs(worst.b - worst.a) <= 100 * eps * std::max(abs(mid), Scalar(1e-300))) {
      // cannot bisect further; accept what we have
      break;
    }
    heap.pop();
    auto left = detail::kronrod21<Scalar>(f, worst.a, mid);
    auto right = detail::kronrod21<Scalar>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to shed the drift of the running updates.
  Scalar value = 0, err = 0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.abs_error = err;
  out.panels = panels;
  return out;
}

/// Sum of gauss_kronrod over consecutive pieces [p0,p1], [p1,p2], ...
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_pieces(F&& f, const std::vector<Scalar>& points, const QuadratureSpec& spec = {}) {
  QuadratureResult<Scalar> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] > points[i]) out += gauss_kronrod<Scalar>(f, points[i], points[i + 1], spec);
  }
  return out;
}

/// Integral of f over [a, infinity), a >= 0, where f(z) decays like z^-decay_power
/// (decay_power > 1, or +infinity for faster-than-polynomial decay).
/// Beyond max(a,1) the integral is taken in the variable s = log z up to
/// spec.tail_cut; the remainder is closed analytically as f(Z) Z / (q - 1).
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_upper_tail(F&& f, Scalar a, Scalar decay_power, const QuadratureSpec& spec = {}) {
  using std::abs;
  using std::exp;
  using std::log;
  if (!(a >= 0)) throw std::invalid_argument("integrate_upper_tail: lower limit must be nonnegative");
  if (!(decay_power > 1)) throw std::invalid_argument("integrate_upper_tail: decay power must exceed 1");
  QuadratureResult<Scalar> out;
  Scalar start = a;
  if (a < 1) {
    out += gauss_kronrod<Scalar>(f, a, Scalar(1), spec);
    start = 1;
  }
  const Scalar cut = std::max(Scalar(spec.tail_cut), 2 * start);
  auto mapped = [&](Scalar s) {
    const Scalar z = start * exp(s);
    return f(z) * z;
  };
  out += gauss_kronrod<Scalar>(mapped, Scalar(0), log(cut / start), spec);
  if (std::isfinite(static_cast<double>(decay_power))) {
    const Scalar fz = f(cut);
    if (fz != 0) {
      const Scalar closure = fz * cut / (decay_power - 1);
      const Scalar fh = f(cut / 2);
      Scalar mismatch = 0;
      if (fh != 0 && fh / fz > 0) {
        const Scalar local = log(fh / fz) / log(Scalar(2));
        mismatch = abs(local - decay_power) / (decay_power - 1);
      }
      out.value += closure;
      out.abs_error += abs(closure) * mismatch;
    }
  }
  return out;
}

}  // namespace stable_ergo
