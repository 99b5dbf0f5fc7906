#include "stable_ergo/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "stable_ergo/errors.hpp"
#include "stable_ergo/measure.hpp"
#include "stable_ergo/parallel.hpp"

namespace stable_ergo {

Grid::Grid(double R_, Index n_, KillingSet excluded_, double grading_)
    : R(R_), n(n_), excluded(excluded_), grading(grading_) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("grid radius must be positive and finite");
  if (n < 2 || n % 2 != 0) throw DomainError("grid cell count must be even and at least 2");
  if (excluded == KillingSet::unit_interval && !(R > 1.0)) throw DomainError("grid radius must exceed 1 off [-1,1]");
  if (!(grading >= 1.0) || !(grading <= 4.0)) throw DomainError("grid grading must lie in [1, 4]");
  if (grading != 1.0 && excluded == KillingSet::unit_interval) {
    throw DomainError("graded grids cluster at 0 and are only available for the punctured line and the half-line");
  }
}

double default_grading(KillingSet B) { return B == KillingSet::unit_interval ? 1.0 : 3.0; }

double Grid::node(Index i) const {
  if (i == n / 2) return 0.0;
  const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
  if (uniform()) return R * t;
  return std::copysign(R * std::pow(std::abs(t), grading), t);
}

bool Grid::active(Index i) const {
  if (i <= 0 || i >= n) return false;
  switch (excluded) {
    case KillingSet::point_zero: return i != n / 2;
    case KillingSet::negative_halfline: return i > n / 2;
    case KillingSet::unit_interval: {
      // the hat on [x_{i-1}, x_{i+1}] must avoid (-1, 1)
      const double tol = 1e-12 * R;
      return node(i - 1) >= 1.0 - tol || node(i + 1) <= -1.0 + tol;
    }
  }
  return false;
}

std::vector<Index> Grid::active_nodes() const {
  std::vector<Index> out;
  for (Index i = 1; i < n; ++i) {
    if (active(i)) out.push_back(i);
  }
  return out;
}

namespace {

// Equal cells: the stiffness is Toeplitz in the node index.
void fill_uniform(FormSystem& sys, const Grid& grid, const std::vector<Index>& act, const std::vector<char>& is_active) {
  const double alpha = sys.alpha;
  const double h = grid.h();
  const Index m = static_cast<Index>(act.size());
  VecX a(grid.n + 1);
  for (Index k = 0; k <= grid.n; ++k) a(k) = hat_stiffness(alpha, h, k);
  parallel_for<Index>(m, [&](Index r) {
    const Index i = act[static_cast<std::size_t>(r)];
    for (Index c = 0; c < m; ++c) sys.stiffness(r, c) = a(std::abs(i - act[static_cast<std::size_t>(c)]));
    // sum_j a_{|i-j|} = 0 over all integers j, so the killing rate is minus the
    // coupling to every killed node: in-grid ones and the two exterior tails
    double killed = hat_stiffness_tail(alpha, h, i + 1) + hat_stiffness_tail(alpha, h, grid.n - i + 1);
    for (Index j = 0; j <= grid.n; ++j) {
      if (!is_active[static_cast<std::size_t>(j)]) killed += a(std::abs(i - j));
    }
    sys.killing(r) = -killed;
  });
}

// General mesh. A piecewise-linear u with slope jumps s_p at x_p satisfies
//   E(u, v) = -(C_alpha / D) sum_{p,q} s_p^u s_q^v |x_p - x_q|^{3-alpha},
// which for equal cells reduces to the Toeplitz entries. Evaluated in long
// double because the double sum cancels to a fourth difference.
void fill_graded(FormSystem& sys, const Grid& grid, const std::vector<Index>& act, const std::vector<char>& is_active,
                 const std::vector<double>& x) {
  using LD = long double;
  const double alpha = sys.alpha;
  const LD pre = static_cast<LD>(frac_kernel_constant(alpha)) /
                 static_cast<LD>(alpha * (alpha - 1) * (2 - alpha) * (3 - alpha));
  const LD p = 3.0L - static_cast<LD>(alpha);
  const Index m = static_cast<Index>(act.size());
  const std::size_t N = static_cast<std::size_t>(grid.n + 1);

  auto hat_jumps = [&](std::size_t i) {
    const LD hl = static_cast<LD>(x[i]) - static_cast<LD>(x[i - 1]);
    const LD hr = static_cast<LD>(x[i + 1]) - static_cast<LD>(x[i]);
    return std::array<LD, 3>{1.0L / hl, -1.0L / hl - 1.0L / hr, 1.0L / hr};
  };
  // w = 1 on the killed nodes and outside [-R, R], 0 on active nodes; its
  // slope jumps are nonzero only where activity changes
  std::vector<LD> wjump(N, 0.0L);
  auto wval = [&](std::size_t j) { return is_active[j] ? 0.0L : 1.0L; };
  for (std::size_t j = 0; j < N; ++j) {
    const LD left = j == 0 ? 0.0L : (wval(j) - wval(j - 1)) / (static_cast<LD>(x[j]) - static_cast<LD>(x[j - 1]));
    const LD right = j + 1 == N ? 0.0L : (wval(j + 1) - wval(j)) / (static_cast<LD>(x[j + 1]) - static_cast<LD>(x[j]));
    wjump[j] = right - left;
  }

  parallel_for<Index>(m, [&](Index r) {
    const std::size_t i = static_cast<std::size_t>(act[static_cast<std::size_t>(r)]);
    const auto si = hat_jumps(i);
    // G_q = sum_p s_p^i |x_p - x_q|^{3-alpha}
    std::vector<LD> G(N);
    for (std::size_t q = 0; q < N; ++q) {
      LD g = 0.0L;
      for (int d = -1; d <= 1; ++d) {
        const LD dist = std::fabs(static_cast<LD>(x[i + d]) - static_cast<LD>(x[q]));
        if (dist > 0) g += si[static_cast<std::size_t>(d + 1)] * std::pow(dist, p);
      }
      G[q] = g;
    }
    for (Index c = 0; c < m; ++c) {
      const std::size_t j = static_cast<std::size_t>(act[static_cast<std::size_t>(c)]);
      const auto sj = hat_jumps(j);
      sys.stiffness(r, c) = static_cast<double>(-pre * (sj[0] * G[j - 1] + sj[1] * G[j] + sj[2] * G[j + 1]));
    }
    LD kill = 0.0L;
    for (std::size_t q = 0; q < N; ++q) {
      if (wjump[q] != 0.0L) kill += wjump[q] * G[q];
    }
    sys.killing(r) = static_cast<double>(pre * kill);
  });
  // symmetrize the rounding
  sys.stiffness = (0.5 * (sys.stiffness + sys.stiffness.transpose())).eval();
}

}  // namespace

FormSystem assemble_form(const SigmaProfile& profile, double alpha, const Grid& grid, const QuadratureSpec& spec) {
  require_alpha(alpha);
  spec.validate();
  if (grid.n > kMaxDenseNodes) {
    std::ostringstream os;
    os << "grid with n = " << grid.n << " exceeds the dense limit of " << kMaxDenseNodes << " cells";
    throw DomainError(os.str());
  }
  const std::vector<Index> act = grid.active_nodes();
  // connected runs of active nodes
  for (std::size_t s = 0; s < act.size();) {
    std::size_t e = s;
    while (e + 1 < act.size() && act[e + 1] == act[e] + 1) ++e;
    if (e - s + 1 < 4) {
      std::ostringstream os;
      os << "grid too coarse: a connected run of active nodes near x = " << grid.node(act[s]) << " has only "
         << (e - s + 1) << " node(s)";
      throw GridTooCoarse(os.str());
    }
    s = e + 1;
  }
  if (act.empty()) throw GridTooCoarse("grid has no active nodes");

  const Index m = static_cast<Index>(act.size());
  std::vector<double> x(static_cast<std::size_t>(grid.n + 1));
  for (Index i = 0; i <= grid.n; ++i) x[static_cast<std::size_t>(i)] = grid.node(i);

  FormSystem sys;
  sys.alpha = alpha;
  sys.grid = grid;
  sys.stiffness.resize(m, m);
  sys.mass.resize(m);
  sys.killing.resize(m);
  sys.nodes.resize(m);

  std::vector<char> is_active(static_cast<std::size_t>(grid.n + 1), 0);
  for (Index i : act) is_active[static_cast<std::size_t>(i)] = 1;

  if (grid.uniform()) {
    fill_uniform(sys, grid, act, is_active);
  } else {
    fill_graded(sys, grid, act, is_active, x);
  }

  parallel_for<Index>(m, [&](Index r) {
    const std::size_t i = static_cast<std::size_t>(act[static_cast<std::size_t>(r)]);
    const double xi = x[i], xl = x[i - 1], xr = x[i + 1];
    sys.nodes(r) = xi;
    auto left = [&](double y) { return (y - xl) / (xi - xl) * profile.speed_density(y, alpha); };
    auto right = [&](double y) { return (xr - y) / (xr - xi) * profile.speed_density(y, alpha); };
    sys.mass(r) = gauss_kronrod<double>(left, xl, xi, spec).value + gauss_kronrod<double>(right, xi, xr, spec).value;
  });
  return sys;
}

nlohmann::json EigenResult::to_json() const {
  return {{"R", R},
          {"n", n},
          {"grading", grading},
          {"lambda0", lambda0},
          {"residual", residual},
          {"iterations", iterations},
          {"positive_ground_state", positive},
          {"mass_convention", "unnormalized speed measure"}};
}

namespace {

double rayleigh(const MatX& K, const VecX& M, const VecX& v) { return v.dot(K * v) / v.dot(M.cwiseProduct(v)); }

}  // namespace

EigenResult solve_lambda0(const FormSystem& sys, const SolveOptions& opt) {
  const MatX& K = sys.stiffness;
  const VecX& M = sys.mass;
  const Index m = K.rows();
  if (m == 0) throw GridTooCoarse("no active degrees of freedom");
  if (M.size() != m || K.cols() != m) throw DomainError("stiffness and mass sizes disagree");
  if ((M.array() <= 0.0).any()) throw DomainError("mass entries must be positive");

  EigenResult out;
  if (sys.grid) {
    out.R = sys.grid->R;
    out.n = sys.grid->n;
    out.grading = sys.grid->grading;
  }

  Eigen::LLT<MatX> llt(K);
  if (llt.info() != Eigen::Success) throw NoConvergence("stiffness matrix is not positive definite", INFINITY);

  VecX v = VecX::Ones(m);
  v /= std::sqrt(v.dot(M.cwiseProduct(v)));
  double rho = rayleigh(K, M, v);
  double residual = INFINITY;
  bool shifted = false;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    VecX w = llt.solve(M.cwiseProduct(v));
    w /= std::sqrt(w.dot(M.cwiseProduct(w)));
    if (w.sum() < 0) w = -w;
    const double next = rayleigh(K, M, w);
    const VecX Mw = M.cwiseProduct(w);
    residual = (K * w - next * Mw).norm() / Mw.norm();
    const double change = std::abs(next - rho) / std::abs(next);
    v = std::move(w);
    rho = next;
    out.iterations = it;
    if (residual <= opt.residual_tol) break;
    if (!shifted && change < 1e-4) {
      // the Rayleigh quotient bounds lambda_0 from above, so a shift slightly
      // below it keeps K - shift M positive definite unless rho is still far off
      for (double factor : {0.99, 0.9, 0.5}) {
        MatX shifted_k = K;
        shifted_k.diagonal() -= factor * rho * M;
        llt.compute(shifted_k);
        if (llt.info() == Eigen::Success) {
          shifted = true;
          break;
        }
      }
      if (!shifted) llt.compute(K);
      shifted = true;
    }
  }
  out.lambda0 = rho;
  out.residual = residual;
  out.eigvec = v;
  const double scale = v.cwiseAbs().maxCoeff();
  out.positive = (v.array() >= -1e-10 * scale).all();
  if (!(residual <= opt.residual_tol)) {
    std::ostringstream os;
    os << "inverse iteration stopped after " << out.iterations << " iterations with residual " << residual;
    throw NoConvergence(os.str(), residual);
  }
  return out;
}

std::vector<EigenResult> lambda0_numeric(const SigmaProfile& profile, double alpha, KillingSet B,
                                         const std::vector<double>& R_list, Index n, const SolveOptions& options,
                                         std::optional<double> grading) {
  for (std::size_t i = 1; i < R_list.size(); ++i) {
    if (!(R_list[i] > R_list[i - 1])) throw DomainError("truncation radii must be increasing");
  }
  std::vector<EigenResult> out(R_list.size());
  parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(R_list.size()), [&](std::ptrdiff_t i) {
    const Grid grid(R_list[static_cast<std::size_t>(i)], n, B, grading.value_or(default_grading(B)));
    out[static_cast<std::size_t>(i)] = solve_lambda0(assemble_form(profile, alpha, grid), options);
  });
  return out;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) xs[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, double(i) / (count - 1));
  return xs;
}

}  // namespace

RayleighUpper rayleigh_upper(const SigmaProfile& profile, const AlphaConstants& k, const std::vector<double>& x0_grid,
                             const QuadratureSpec& spec) {
  if (x0_grid.empty()) throw DomainError("rayleigh_upper: empty x0 grid");
  const double p = k.alpha - 1;
  const GreenKernel kernel(GreenKernel::Kind::punctured, k);
  const std::vector<double> xs = log_grid(1e-3, 1e4, 36);
  RayleighUpper best{INFINITY, 0.0};
  for (double x0 : x0_grid) {
    if (!(x0 > 0.0)) throw DomainError("rayleigh_upper: x0 must be positive");
    const TestFunction g{[x0, p](double y) { return std::pow(std::min(std::abs(y), x0), p); }, 0.0};
    // ratios at +x and -x for every sample radius
    std::vector<double> ratio(2 * xs.size());
    parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(ratio.size()), [&](std::ptrdiff_t j) {
      const double x = (j % 2 == 0 ? 1.0 : -1.0) * xs[static_cast<std::size_t>(j / 2)];
      ratio[static_cast<std::size_t>(j)] = g.eval(x) / green_apply(kernel, profile, g, x, spec);
    });
    double sup_plus = 0.0, sup_minus = 0.0;
    for (std::size_t j = 0; j < ratio.size(); ++j) {
      (j % 2 == 0 ? sup_plus : sup_minus) = std::max(j % 2 == 0 ? sup_plus : sup_minus, ratio[j]);
    }
    const double value = sup_plus + sup_minus;
    if (value < best.value) best = {value, x0};
  }
  return best;
}

double variational_lower(const SigmaProfile& profile, const AlphaConstants& k, KillingSet B,
                         const std::optional<TestFunction>& f, const QuadratureSpec& spec) {
  const double half = (k.alpha - 1) / 2;
  const GreenKernel kernel = GreenKernel::for_domain(B, k);
  TestFunction test;
  if (f) {
    test = *f;
  } else if (B == KillingSet::unit_interval) {
    const double a = k.alpha;
    test = {[a](double y) { return std::abs(y) <= 1.0 ? 0.0 : std::sqrt(harmonic_h(y, a)); }, half};
  } else {
    test = {[half](double y) { return std::pow(std::abs(y), half); }, half};
  }
  // f must vanish where B meets its killing set
  const std::vector<double> boundary = B == KillingSet::unit_interval ? std::vector<double>{-1.0, 1.0}
                                                                      : std::vector<double>{0.0};
  for (double b : boundary) {
    if (test.eval(b) != 0.0) {
      throw PreconditionError("variational_lower: test function must vanish at x = " + std::to_string(b));
    }
  }
  std::vector<double> xs;
  const double base = B == KillingSet::unit_interval ? 1.0 : 0.0;
  for (double r : log_grid(1e-4, 1e4, 49)) {
    xs.push_back(base + r);
    if (B != KillingSet::negative_halfline) xs.push_back(-base - r);
  }
  std::vector<double> ratio(xs.size());
  parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(xs.size()), [&](std::ptrdiff_t j) {
    const double x = xs[static_cast<std::size_t>(j)];
    const double fx = test.eval(x);
    if (!(fx > 0.0)) throw PreconditionError("variational_lower: test function must be positive on B");
    ratio[static_cast<std::size_t>(j)] = fx / green_apply(kernel, profile, test, x, spec);
  });
  return *std::min_element(ratio.begin(), ratio.end());
}

}  // namespace stable_ergo
