#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "stable_ergo/criteria.hpp"
#include "stable_ergo/spectral.hpp"

using namespace stable_ergo;

namespace {

std::vector<double> x0_grid() { return {0.3, 1.0, 3.0, 10.0}; }

double dense_lambda0(const FormSystem& sys) {
  const MatX& K = sys.stiffness;
  const MatX M = sys.mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(K, M);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("separated cell coupling") {
  CHECK(cell_coupling(1.5, 0.0, 1.0, 2.0, 3.0) == doctest::Approx(0.0650821298345667105).epsilon(1e-12));
  CHECK(cell_coupling(1.2, -1.0, -0.5, 0.5, 1.0) == doctest::Approx(0.0365997401035362562).epsilon(1e-12));
  CHECK(cell_coupling(1.8, 0.0, 1.0, 1.25, 4.0) == doctest::Approx(0.2415805617171301600).epsilon(1e-12));
  // additivity in the second cell
  for (double a : {1.2, 1.5, 1.8}) {
    CHECK(cell_coupling(a, 0.0, 1.0, 2.0, 3.0) + cell_coupling(a, 0.0, 1.0, 3.0, 4.0) ==
          doctest::Approx(cell_coupling(a, 0.0, 1.0, 2.0, 4.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(cell_coupling(1.5, 0.0, 1.0, 1.0, 2.0), DomainError);
}

TEST_CASE("hat stiffness entries") {
  // independent values from B-spline autocorrelation quadrature and mpmath
  CHECK(hat_stiffness(1.5, 1.0, 0) == doctest::Approx(1.24637321203).epsilon(1e-10));
  CHECK(hat_stiffness(1.5, 1.0, 1) == doctest::Approx(-0.469392255008).epsilon(1e-10));
  CHECK(hat_stiffness(1.5, 1.0, 2) == doctest::Approx(-0.0989127158223).epsilon(1e-10));
  CHECK(hat_stiffness(1.5, 1.0, 3) == doctest::Approx(-0.0231630806981).epsilon(1e-10));
  CHECK(hat_stiffness(1.5, 1.0, 5) == doctest::Approx(-0.00569003308253).epsilon(1e-10));
  CHECK(hat_stiffness(1.5, 1.0, 6) == doctest::Approx(-0.0035380745930938).epsilon(1e-12));
  CHECK(hat_stiffness(1.5, 1.0, 7) == doctest::Approx(-0.0023793627919317).epsilon(1e-12));
  CHECK(hat_stiffness(1.5, 1.0, 50) == doctest::Approx(-1.6935568161519e-5).epsilon(1e-10));
  CHECK(hat_stiffness(1.5, 1.0, -3) == hat_stiffness(1.5, 1.0, 3));
  // scaling in the mesh width
  CHECK(hat_stiffness(1.5, 0.25, 4) == doctest::Approx(std::pow(0.25, -0.5) * hat_stiffness(1.5, 1.0, 4)).epsilon(1e-13));
}

TEST_CASE("hat stiffness tails telescope") {
  for (double a : {1.2, 1.5, 1.8}) {
    for (Index K : {1, 3, 5, 6, 20}) {
      double partial = 0.0;
      for (Index k = K; k < K + 2000; ++k) partial += hat_stiffness(a, 1.0, k);
      const double rest = hat_stiffness_tail(a, 1.0, K + 2000);
      CHECK(partial + rest == doctest::Approx(hat_stiffness_tail(a, 1.0, K)).epsilon(1e-10));
    }
    // constants are in the kernel: a_0 + 2 sum_{k>=1} a_k = 0
    CHECK(std::abs(hat_stiffness(a, 1.0, 0) + 2 * hat_stiffness_tail(a, 1.0, 1)) < 1e-13);
  }
  CHECK_THROWS_AS(hat_stiffness_tail(1.5, 1.0, 0), DomainError);
}

TEST_CASE("grid layout") {
  const Grid g(10.0, 20, KillingSet::point_zero);
  CHECK(g.h() == doctest::Approx(1.0));
  CHECK(g.node(10) == 0.0);
  CHECK_FALSE(g.active(0));
  CHECK_FALSE(g.active(10));
  CHECK_FALSE(g.active(20));
  CHECK(g.active_nodes().size() == 18);

  const Grid half(10.0, 20, KillingSet::negative_halfline);
  CHECK(half.active_nodes().front() == 11);
  CHECK(half.active_nodes().size() == 9);

  // hats must stay off [-1,1]
  const Grid ic(10.0, 20, KillingSet::unit_interval);
  CHECK(ic.active(8));
  CHECK_FALSE(ic.active(9));
  CHECK_FALSE(ic.active(11));
  CHECK(ic.active(12));

  const Grid graded(10.0, 20, KillingSet::point_zero, 3.0);
  CHECK(graded.node(11) == doctest::Approx(10.0 * 1e-3));
  CHECK(graded.node(0) == doctest::Approx(-10.0));
  for (Index i = 0; i < 20; ++i) CHECK(graded.node(i) < graded.node(i + 1));

  CHECK_THROWS_AS(Grid(10.0, 21, KillingSet::point_zero), DomainError);
  CHECK_THROWS_AS(Grid(0.5, 20, KillingSet::unit_interval), DomainError);
  CHECK_THROWS_AS(Grid(10.0, 20, KillingSet::unit_interval, 2.0), DomainError);
  CHECK(default_grading(KillingSet::point_zero) == 3.0);
  CHECK(default_grading(KillingSet::unit_interval) == 1.0);
}

TEST_CASE("assembled form structure") {
  const auto p = SigmaProfile::polynomial(2.0);
  for (double grading : {1.0, 2.5}) {
    const FormSystem sys = assemble_form(p, 1.5, Grid(20.0, 80, KillingSet::point_zero, grading));
    const Index m = sys.stiffness.rows();
    CHECK(m == 78);
    CHECK((sys.stiffness - sys.stiffness.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) {
        if (i != j) CHECK(sys.stiffness(i, j) <= 0.0);
      }
    }
    CHECK((sys.mass.array() > 0).all());
    CHECK((sys.killing.array() >= 0).all());
    // K 1 = killing, the graph part annihilates constants
    const VecX row = sys.stiffness * VecX::Ones(m);
    const double scale = sys.stiffness.diagonal().cwiseAbs().maxCoeff();
    CHECK((row - sys.killing).cwiseAbs().maxCoeff() < 1e-10 * scale);
  }
}

TEST_CASE("general mesh path agrees with the Toeplitz path") {
  const auto p = SigmaProfile::polynomial(2.0);
  const FormSystem a = assemble_form(p, 1.5, Grid(10.0, 40, KillingSet::negative_halfline));
  const FormSystem b = assemble_form(p, 1.5, Grid(10.0, 40, KillingSet::negative_halfline, 1.0 + 1e-12));
  CHECK((a.stiffness - b.stiffness).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.killing - b.killing).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.mass - b.mass).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("too coarse grids") {
  const auto p = SigmaProfile::polynomial(2.0);
  CHECK_THROWS_AS(assemble_form(p, 1.5, Grid(10.0, 4, KillingSet::point_zero)), GridTooCoarse);
  CHECK_THROWS_AS(assemble_form(p, 1.5, Grid(10.0, 8, KillingSet::negative_halfline)), GridTooCoarse);
  CHECK_THROWS_AS(assemble_form(p, 1.5, Grid(10.0, 4098, KillingSet::point_zero)), DomainError);
  CHECK_THROWS_AS(assemble_form(p, 2.5, Grid(10.0, 40, KillingSet::point_zero)), AlphaOutOfRange);
}

TEST_CASE("scalar and scaled pencils") {
  FormSystem one;
  one.alpha = 1.5;
  one.stiffness = MatX::Constant(1, 1, 3.0);
  one.killing = VecX::Constant(1, 3.0);
  one.mass = VecX::Constant(1, 4.0);
  one.nodes = VecX::Zero(1);
  CHECK(solve_lambda0(one).lambda0 == doctest::Approx(0.75).epsilon(1e-14));

  const auto p = SigmaProfile::polynomial(2.0);
  FormSystem sys = assemble_form(p, 1.5, Grid(10.0, 60, KillingSet::point_zero));
  const EigenResult base = solve_lambda0(sys);
  sys.mass *= 2.0;
  const EigenResult doubled = solve_lambda0(sys);
  CHECK(doubled.lambda0 == doctest::Approx(0.5 * base.lambda0).epsilon(1e-9));
}

TEST_CASE("inverse iteration against a dense generalized solver") {
  const auto p = SigmaProfile::polynomial(2.0);
  for (auto B : {KillingSet::point_zero, KillingSet::negative_halfline, KillingSet::unit_interval}) {
    const FormSystem sys = assemble_form(p, 1.5, Grid(12.0, 120, B, default_grading(B)));
    const EigenResult r = solve_lambda0(sys);
    CHECK(r.lambda0 == doctest::Approx(dense_lambda0(sys)).epsilon(1e-8));
    CHECK(r.residual <= 1e-8);
    CHECK(r.positive);
    CHECK((r.eigvec.array() > 0).all());
    CHECK(r.eigvec.dot(sys.mass.cwiseProduct(r.eigvec)) == doctest::Approx(1.0));
  }
}

TEST_CASE("graded mesh self-convergence") {
  const auto p = SigmaProfile::polynomial(2.0);
  const double coarse = solve_lambda0(assemble_form(p, 1.5, Grid(25.0, 500, KillingSet::point_zero, 3.0))).lambda0;
  const double fine = solve_lambda0(assemble_form(p, 1.5, Grid(25.0, 1000, KillingSet::point_zero, 3.0))).lambda0;
  CHECK(std::abs(fine - coarse) / fine < 1e-2);
}

TEST_CASE("truncation monotonicity and domain ordering") {
  const auto p = SigmaProfile::polynomial(2.0);
  const auto punct = lambda0_numeric(p, 1.5, KillingSet::point_zero, {10.0, 25.0, 50.0}, 600);
  REQUIRE(punct.size() == 3);
  CHECK(punct[0].lambda0 >= punct[1].lambda0 * (1 - 1e-3));
  CHECK(punct[1].lambda0 >= punct[2].lambda0 * (1 - 1e-3));
  CHECK(punct[2].grading == 3.0);

  const auto half = lambda0_numeric(p, 1.5, KillingSet::negative_halfline, {10.0, 25.0, 50.0}, 600);
  for (std::size_t i = 0; i < 3; ++i) CHECK(half[i].lambda0 >= punct[i].lambda0);
  const double half_lower = *rate_bounds(p, 1.5).lambda0_halfline_lower;
  CHECK(half.back().lambda0 >= 0.9 * half_lower);

  CHECK_THROWS_AS(lambda0_numeric(p, 1.5, KillingSet::point_zero, {25.0, 10.0}, 100), DomainError);
}

TEST_CASE("bound ordering for polynomial profiles") {
  for (double gamma : {1.0, 2.0}) {
    for (double alpha : {1.2, 1.5, 1.8}) {
      CAPTURE(gamma);
      CAPTURE(alpha);
      const auto p = SigmaProfile::polynomial(gamma);
      const AlphaConstants k(alpha);
      const RateBounds bounds = rate_bounds(p, alpha);
      const double lower = variational_lower(p, k, KillingSet::point_zero);
      // with gamma = 1 the speed measure has an |x|^{-alpha} tail and the
      // truncated eigenvalue approaches its limit only logarithmically in R
      const double R = gamma == 1.0 ? 5e4 : 50.0;
      const double numeric = lambda0_numeric(p, alpha, KillingSet::point_zero, {R}, 800).front().lambda0;
      const double upper = rayleigh_upper(p, k, x0_grid()).value;
      CHECK(lower >= *bounds.lambda0_lower * (1 - 1e-6));
      CHECK(lower <= 1.1 * numeric);
      CHECK(numeric <= 1.1 * upper);
      CHECK(upper <= 1.1 * *bounds.lambda0_upper);
    }
  }
}

TEST_CASE("Rayleigh construction for the linear profile") {
  const auto p = SigmaProfile::polynomial(1.0);
  const AlphaConstants k(1.5);
  const double construction = 2 * (k.alpha - 1) / k.omega;
  CHECK(construction == doctest::Approx(0.62666).epsilon(1e-5));
  CHECK(rayleigh_upper(p, k, x0_grid()).value <= construction * (1 + 1e-6));
  // a single huge x0 keeps every integral finite
  const RayleighUpper huge = rayleigh_upper(SigmaProfile::polynomial(2.0), k, {1e6});
  CHECK(std::isfinite(huge.value));
  CHECK(huge.best_x0 == 1e6);
}

TEST_CASE("variational lower bounds") {
  const auto p = SigmaProfile::polynomial(2.0);
  const AlphaConstants k(1.5);
  const RateBounds bounds = rate_bounds(p, 1.5);
  CHECK(variational_lower(p, k, KillingSet::point_zero) >= *bounds.lambda0_lower * (1 - 1e-6));
  CHECK(variational_lower(p, k, KillingSet::negative_halfline) >= *bounds.lambda0_halfline_lower * (1 - 1e-6));
  const TestFunction one{[](double) { return 1.0; }, 0.0};
  CHECK_THROWS_AS(variational_lower(p, k, KillingSet::point_zero, one), PreconditionError);
}
