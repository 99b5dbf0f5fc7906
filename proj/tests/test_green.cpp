#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stable_ergo/green.hpp"
#include "stable_ergo/measure.hpp"

using namespace stable_ergo;

namespace {

QuadratureSpec tight() {
  QuadratureSpec s;
  s.rel_tol = 1e-10;
  return s;
}

const TestFunction kOne{[](double) { return 1.0; }, 0.0};

}  // namespace

TEST_CASE("punctured kernel closed form") {
  const AlphaConstants k(1.5);
  CHECK(green_punctured(3.0, 0.0, k) == 0.0);
  CHECK(green_punctured(0.0, -2.0, k) == 0.0);
  CHECK(green_punctured(1.0, -1.0, 1.5) == doctest::Approx(0.46738995451021813786).epsilon(1e-13));
  CHECK(green_punctured(2.0, 5.0, 1.3) == green_punctured(5.0, 2.0, 1.3));
}

TEST_CASE("interval-complement kernel") {
  CHECK(green_complement_interval(2.0, 3.0, 1.5) == doctest::Approx(0.86316780288931265773).epsilon(1e-11));
  CHECK(green_complement_interval(-2.0, 5.0, 1.2) == doctest::Approx(0.28011676547480280162).epsilon(1e-11));
  CHECK(green_complement_interval(2.0, 1.0, 1.5) == 0.0);
  CHECK(green_complement_interval(2.0, 1.0 + 1e-9, 1.5) == doctest::Approx(0.0).epsilon(1e-4));
  CHECK_THROWS_AS(green_complement_interval(0.5, 3.0, 1.5), DomainError);
  // the off-diagonal value approaches the diagonal like |x-y|^{alpha-1}
  const AlphaConstants k(1.5);
  CHECK(green_complement_interval(3.0, 3.0, k) ==
        doctest::Approx(green_complement_interval(3.0, 3.0 + 1e-14, k)).epsilon(1e-5));
}

TEST_CASE("half-line kernel") {
  CHECK(green_halfline(1.0, 1.0, 1.5) == doctest::Approx(1.3318717420068010478).epsilon(1e-13));
  CHECK(green_halfline(1.0, 2.0, 1.5) == doctest::Approx(0.81773973233919109565).epsilon(1e-12));
  CHECK(green_halfline(0.3, 7.0, 1.8) == doctest::Approx(0.27164262616440196044).epsilon(1e-12));
  CHECK(green_halfline(1e-12, 1.0, 1.5) < 1e-8);
  CHECK_THROWS_AS(green_halfline(-1.0, 1.0, 1.5), DomainError);
  const AlphaConstants k(1.5);
  CHECK(green_halfline(2.0, 2.0, k) == doctest::Approx(green_halfline(2.0, 2.0 + 1e-14, k)).epsilon(1e-5));
}

TEST_CASE("kernel properties on random pairs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double alpha : {1.2, 1.5, 1.8}) {
    const AlphaConstants k(alpha);
    int violations = 0;
    for (int i = 0; i < 2000; ++i) {
      const double x = (unit(rng) < 0.5 ? -1 : 1) * std::exp(std::log(50.0) * (2 * unit(rng) - 1));
      const double y = (unit(rng) < 0.5 ? -1 : 1) * std::exp(std::log(50.0) * (2 * unit(rng) - 1));
      const double m = std::pow(std::min(std::abs(x), std::abs(y)), alpha - 1);
      const double gp = green_punctured(x, y, k);
      if (std::abs(gp - green_punctured(y, x, k)) > 1e-12) ++violations;
      if (gp > k.omega * m + 1e-12 || gp < -1e-12) ++violations;
      if (x * y > 0 && gp < k.omega / 2 * m - 1e-12) ++violations;

      const double ax = 1 + 49 * unit(rng), ay = 1 + 49 * unit(rng);
      const double sx = unit(rng) < 0.5 ? -ax : ax, sy = unit(rng) < 0.5 ? -ay : ay;
      const double gi = green_complement_interval(sx, sy, k);
      if (gi < 0 || std::abs(gi - green_complement_interval(sy, sx, k)) > 1e-12) ++violations;

      const double gh = green_halfline(ax, ay, k);
      if (std::abs(gh - green_halfline(ay, ax, k)) > 1e-12) ++violations;
      if ((alpha - 1) * k.gamma_half * k.gamma_half * gh > std::pow(std::min(ax, ay), alpha - 1) + 1e-12) ++violations;
      if (gh > green_halfline_majorant(ax, ay, k) + 1e-12) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("Eigen array overloads agree with the scalar kernels") {
  const AlphaConstants k(1.5);
  Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(9, 1.5, 9.5);
  const Eigen::ArrayXd gp = green_punctured(xs, 2.0, k);
  const Eigen::ArrayXd gh = green_halfline(xs, 2.0, k);
  const Eigen::ArrayXd gi = green_complement_interval(xs, 2.0, k);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    CHECK(gp(i) == green_punctured(xs(i), 2.0, k));
    CHECK(gh(i) == green_halfline(xs(i), 2.0, k));
    CHECK(gi(i) == green_complement_interval(xs(i), 2.0, k));
  }
}

TEST_CASE("green_apply on the punctured line") {
  const AlphaConstants k(1.5);
  const GreenKernel kernel(GreenKernel::Kind::punctured, k);
  const auto p2 = SigmaProfile::polynomial(2.0);
  const TestFunction zero{[](double) { return 0.0; }, 0.0};
  CHECK(green_apply(kernel, p2, zero, 1.0) == 0.0);
  CHECK(green_apply(kernel, p2, kOne, 5.0, tight()) == doctest::Approx(0.62512616236558053).epsilon(1e-9));
  CHECK(green_apply(kernel, p2, kOne, 0.5, tight()) == doctest::Approx(0.46061209213966636).epsilon(1e-9));
  for (double x : {-30.0, -1.0, 0.01, 2.0, 100.0}) {
    CHECK(green_apply(kernel, p2, kOne, x) <= k.omega * std::numbers::pi / 4);
  }
  CHECK_THROWS_AS(green_apply(kernel, SigmaProfile::expression("1"), kOne, 1.0), IntegralDiverged);
  CHECK_THROWS_AS(green_apply(kernel, p2, kOne, 0.0), DomainError);
}

TEST_CASE("II operator") {
  const AlphaConstants k(1.5);
  const auto p2 = SigmaProfile::polynomial(2.0);
  CHECK(ii_operator(p2, k, 0.1, std::nullopt, tight()) == doctest::Approx(0.37184560093970179).epsilon(1e-8));
  CHECK(ii_operator(p2, k, 1.0, std::nullopt, tight()) == doctest::Approx(0.52289933398548881).epsilon(1e-8));
  CHECK(ii_operator(p2, k, 10.0, std::nullopt, tight()) == doctest::Approx(0.37184560093970179).epsilon(1e-8));
  CHECK(ii_operator(SigmaProfile::polynomial(1.5), k, 1.0, std::nullopt, tight()) ==
        doctest::Approx(1.128218892803294).epsilon(1e-8));
  const double bound = 4 * k.omega * delta(p2, 1.5).value;
  CHECK(bound == doctest::Approx(2.07297).epsilon(1e-5));
  for (double x : {1e-6, 1e-4, 0.1, 1.0, 10.0, -3.0}) CHECK(ii_operator(p2, k, x) <= bound);
  CHECK_THROWS_AS(ii_operator(SigmaProfile::expression("1"), k, 1.0), IntegralDiverged);
  const TestFunction one_everywhere{[](double) { return 1.0; }, 0.0};
  CHECK_THROWS_AS(ii_operator(p2, k, 1.0, one_everywhere), PreconditionError);
}

TEST_CASE("II+ operator") {
  const AlphaConstants k(1.5);
  const auto p2 = SigmaProfile::polynomial(2.0);
  const struct {
    double x, value;
  } oracle[] = {{1e-4, 0.05547485408921087}, {1e-3, 0.09864071544886784}, {0.5, 0.39666399113265134},
                {2.0, 0.39666399113251673},  {20.0, 0.25909399137823437}};
  for (const auto& o : oracle) {
    CAPTURE(o.x);
    CHECK(ii_plus_operator(p2, k, o.x, tight()) == doctest::Approx(o.value).epsilon(1e-8));
    CHECK(ii_plus_operator_kernel_route(p2, k, o.x, tight()) == doctest::Approx(o.value).epsilon(1e-6));
  }
  const double bound = 4 * delta_plus(p2, 1.5).value / (0.5 * k.gamma_half * k.gamma_half);
  for (double x : {0.5, 2.0, 20.0}) CHECK(ii_plus_operator(p2, k, x) <= bound);
  // x -> 0: the value vanishes
  CHECK(ii_plus_operator(p2, k, 1e-8) < ii_plus_operator(p2, k, 1e-4));
  CHECK_THROWS_AS(ii_plus_operator(SigmaProfile::polynomial(0.8), k, 1.0), IntegralDiverged);
  CHECK_THROWS_AS(ii_plus_operator(p2, k, 0.0), DomainError);
}

TEST_CASE("true half-line Green operator sits below the majorant route") {
  const AlphaConstants k(1.5);
  const auto p2 = SigmaProfile::polynomial(2.0);
  const TestFunction phi{[](double y) { return std::pow(std::abs(y), 0.25); }, 0.25};
  const GreenKernel half(GreenKernel::Kind::halfline, k);
  for (double x : {0.1, 1.0, 10.0}) {
    const double exact = green_apply(half, p2, phi, x) / phi.eval(x);
    CHECK(exact > 0.0);
    CHECK(exact <= ii_plus_operator(p2, k, x) * (1 + 1e-9));
  }
}

TEST_CASE("mean exit bound") {
  const AlphaConstants k(1.5);
  const auto m = mean_exit_bound(SigmaProfile::polynomial(2.0), k);
  CHECK(m.analytic == doctest::Approx(k.omega * std::numbers::pi / 4).epsilon(1e-9));
  CHECK(m.analytic == doctest::Approx(1.25331).epsilon(1e-5));
  CHECK(m.grid_sup <= m.analytic);
  CHECK(m.grid_sup >= 0.62512616236558053);
  CHECK_THROWS_AS(mean_exit_bound(SigmaProfile::polynomial(1.0), k), IntegralDiverged);
  const auto m15 = mean_exit_bound(SigmaProfile::polynomial(1.5), k);
  CHECK(m15.grid_sup <= m15.analytic);
}

TEST_CASE("domain names") {
  CHECK(killing_set_from_string("punctured") == KillingSet::point_zero);
  CHECK(killing_set_from_string("halfline") == KillingSet::negative_halfline);
  CHECK(std::string(to_string(KillingSet::unit_interval)) == "interval-complement");
  CHECK_THROWS_AS(killing_set_from_string("disk"), DomainError);
}
