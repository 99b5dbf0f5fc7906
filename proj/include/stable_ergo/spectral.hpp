#pragma once

// Local Dirichlet eigenvalue lambda_0(B) of the time-changed process:
//   lambda_0(B) = inf { E(f,f) : f = 0 off B, mu(f^2) = 1 },
//   E(f,f) = (C_alpha/2) int int (f(x)-f(y))^2 |x-y|^{-1-alpha} dx dy.
// The form is discretized with continuous piecewise-linear hat functions on a
// uniform mesh of [-R, R]; everything outside [-R, R] is killed.

#include <optional>
#include <vector>

#include <json.hpp>

#include "stable_ergo/green.hpp"
#include "stable_ergo/quadrature.hpp"
#include "stable_ergo/sigma_profile.hpp"
#include "stable_ergo/special_functions.hpp"
#include "stable_ergo/types.hpp"

namespace stable_ergo {

inline constexpr Index kMaxDenseNodes = 4096;

/// Mesh of [-R, R] with nodes x_0 < ... < x_n. With grading = 1 the cells are
/// equal, x_i = -R + i h with h = 2R/n. With grading b > 1 the nodes are
/// x_i = R sign(t) |t|^b, t = -1 + 2i/n, which clusters them near 0 (not
/// available off [-1,1]). A node is active when its hat function is supported
/// in the closure of B inside (-R, R).
/// Grading used when none is requested: 3 where the ground state has a cusp at
/// the killed point 0, equal cells off [-1,1].
double default_grading(KillingSet B);

struct Grid {
  double R;
  Index n;
  KillingSet excluded;
  double grading = 1.0;

  Grid(double R_, Index n_, KillingSet excluded_, double grading_ = 1.0);

  bool uniform() const { return grading == 1.0; }
  double h() const { return 2.0 * R / static_cast<double>(n); }
  double node(Index i) const;
  bool active(Index i) const;
  std::vector<Index> active_nodes() const;
};

/// Exact stiffness entries of the hat basis on the infinite uniform mesh:
/// E(phi_i, phi_j) = a_{|i-j|} with
///   a_k = -(C_alpha h^{1-alpha} / D) (F(k-2) - 4F(k-1) + 6F(k) - 4F(k+1) + F(k+2)),
///   F(r) = |r|^{3-alpha}, D = alpha(alpha-1)(2-alpha)(3-alpha).
template <typename Scalar>
Scalar hat_stiffness(Scalar alpha, Scalar h, Index k);

/// sum_{k >= K} a_k for K >= 1, in closed form.
template <typename Scalar>
Scalar hat_stiffness_tail(Scalar alpha, Scalar h, Index K);

/// Stiffness K and lumped mass M restricted to the active nodes. Each row of K
/// sums to the killing rate of that node.
struct FormSystem {
  MatX stiffness;
  VecX mass;     // m_i = int phi_i sigma^{-alpha} dx, unnormalized speed measure
  VecX killing;  // coupling to killed nodes and the exterior, computed independently of K
  VecX nodes;    // positions of the active nodes
  double alpha = 0.0;
  std::optional<Grid> grid;
};

/// Throws GridTooCoarse when a connected run of active nodes has fewer than 4
/// nodes, DomainError when the mesh exceeds kMaxDenseNodes.
FormSystem assemble_form(const SigmaProfile& profile, double alpha, const Grid& grid, const QuadratureSpec& spec = {});

struct EigenResult {
  double lambda0 = 0.0;
  VecX eigvec;  // mass-normalized, nonnegative ground state
  double residual = 0.0;  // ||K v - lambda M v|| / ||M v||
  int iterations = 0;
  double R = 0.0;
  Index n = 0;
  double grading = 1.0;
  bool positive = false;

  nlohmann::json to_json() const;
};

struct SolveOptions {
  int max_iterations = 2000;
  double residual_tol = 1e-8;
};

/// Smallest eigenvalue of the pencil (K, diag(M)) by inverse iteration from a
/// positive start, switching to a shift just below the Rayleigh quotient once it
/// settles. Throws NoConvergence when the residual target is missed.
EigenResult solve_lambda0(const FormSystem& system, const SolveOptions& options = {});

/// One eigensolve per truncation radius, run concurrently.
std::vector<EigenResult> lambda0_numeric(const SigmaProfile& profile, double alpha, KillingSet B,
                                         const std::vector<double>& R_list, Index n, const SolveOptions& options = {},
                                         std::optional<double> grading = std::nullopt);

/// min over x0 of sup_{x>0} g/U^{(0)}g + sup_{x<0} g/U^{(0)}g with g = (|x| min x0)^{alpha-1}.
/// An upper bound on lambda_0(R \ {0}).
struct RayleighUpper {
  double value = 0.0;
  double best_x0 = 0.0;
};
RayleighUpper rayleigh_upper(const SigmaProfile& profile, const AlphaConstants& k, const std::vector<double>& x0_grid,
                             const QuadratureSpec& spec = {});

/// inf over a sample grid of f / U^B f, a lower bound on lambda_0(B). f defaults
/// to |x|^{(alpha-1)/2} on the punctured line and the half-line and to sqrt(h)
/// off [-1,1]. Throws PreconditionError when f does not vanish on the boundary of B.
double variational_lower(const SigmaProfile& profile, const AlphaConstants& k, KillingSet B,
                         const std::optional<TestFunction>& f = std::nullopt, const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------

namespace detail {

// F(k-2) - 4F(k-1) + 6F(k) - 4F(k+1) + F(k+2) for F(r) = |r|^p; a binomial
// series once k is large enough for the direct form to cancel badly.
template <typename Scalar>
Scalar fourth_difference(Scalar p, Index k) {
  using std::abs;
  using std::pow;
  auto F = [p](Scalar r) { return r == 0 ? Scalar(0) : pow(abs(r), p); };
  const Scalar kk = static_cast<Scalar>(k);
  if (k < 6) return F(kk - 2) - 4 * F(kk - 1) + 6 * F(kk) - 4 * F(kk + 1) + F(kk + 2);
  // sum_j c_j (1 + j/k)^p; only even powers m = 2l >= 4 survive, weight 2(4^l - 4)
  Scalar sum = 0, binom = 1, four_l = 1, inv = 1 / (kk * kk), power = 1;
  for (int m = 1; m < 200; ++m) {
    binom *= (p - Scalar(m - 1)) / Scalar(m);
    if (m % 2 == 1) continue;
    four_l *= 4;
    power *= inv;
    if (m < 4) continue;
    const Scalar term = binom * 2 * (four_l - 4) * power;
    sum += term;
    if (abs(term) <= std::numeric_limits<Scalar>::epsilon() * abs(sum)) break;
  }
  return pow(kk, p) * sum;
}

// F(K-2) - 3F(K-1) + 3F(K) - F(K+1), the telescoped sum of fourth_difference over k >= K.
template <typename Scalar>
Scalar third_difference(Scalar p, Index K) {
  using std::abs;
  using std::pow;
  auto F = [p](Scalar r) { return r == 0 ? Scalar(0) : pow(abs(r), p); };
  const Scalar kk = static_cast<Scalar>(K);
  if (K < 6) return F(kk - 2) - 3 * F(kk - 1) + 3 * F(kk) - F(kk + 1);
  // coefficients (-2)^m - 3(-1)^m - 1 vanish for m <= 2
  Scalar sum = 0, binom = 1, inv = 1 / kk, power = 1, two = 1, sign = 1;
  for (int m = 1; m < 200; ++m) {
    binom *= (p - Scalar(m - 1)) / Scalar(m);
    power *= inv;
    two *= -2;
    sign = -sign;
    if (m < 3) continue;
    const Scalar term = binom * (two - 3 * sign - 1) * power;
    sum += term;
    if (abs(term) <= std::numeric_limits<Scalar>::epsilon() * abs(sum)) break;
  }
  return pow(kk, p) * sum;
}

template <typename Scalar>
Scalar hat_prefactor(Scalar alpha, Scalar h) {
  const Scalar d = alpha * (alpha - 1) * (2 - alpha) * (3 - alpha);
  return frac_kernel_constant(alpha) * std::pow(h, 1 - alpha) / d;
}

}  // namespace detail

/// C_alpha times the kernel mass of [a,b] x [c,d], a < b < c < d, from the
/// second antiderivative Psi(r) = r^{1-alpha} / (alpha(alpha-1)). Touching cells
/// have infinite coupling for alpha > 1, which is why the form is discretized
/// with hat functions rather than cell indicators.
template <typename Scalar>
Scalar cell_coupling(Scalar alpha, Scalar a, Scalar b, Scalar c, Scalar d) {
  if (!(a < b && b < c && c < d)) throw DomainError("cell_coupling: cells must be ordered and separated");
  auto psi = [alpha](Scalar r) { return std::pow(r, 1 - alpha) / (alpha * (alpha - 1)); };
  return frac_kernel_constant(alpha) * (psi(d - a) - psi(c - a) - psi(d - b) + psi(c - b));
}

template <typename Scalar>
Scalar hat_stiffness(Scalar alpha, Scalar h, Index k) {
  if (k < 0) k = -k;
  return -detail::hat_prefactor(alpha, h) * detail::fourth_difference(3 - alpha, k);
}

template <typename Scalar>
Scalar hat_stiffness_tail(Scalar alpha, Scalar h, Index K) {
  if (K < 1) throw DomainError("hat_stiffness_tail: K must be at least 1");
  return -detail::hat_prefactor(alpha, h) * detail::third_difference(3 - alpha, K);
}

}  // namespace stable_ergo
