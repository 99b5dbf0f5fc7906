#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stable_ergo/criteria.hpp"
#include "stable_ergo/errors.hpp"

using namespace stable_ergo;

namespace {
constexpr double kOmega15 = 1.5957691216057307;
}

TEST_CASE("classification follows the polynomial exponent") {
  struct Row {
    double gamma;
    Verdict e, x, s;
  };
  const Row rows[] = {{0.5, Verdict::no, Verdict::no, Verdict::no},
                      {0.7, Verdict::yes, Verdict::no, Verdict::no},
                      {1.0, Verdict::yes, Verdict::yes, Verdict::no},
                      {2.0, Verdict::yes, Verdict::yes, Verdict::yes}};
  for (const auto& row : rows) {
    CAPTURE(row.gamma);
    const auto r = classify(SigmaProfile::polynomial(row.gamma), 1.5);
    CHECK(r.ergodic == row.e);
    CHECK(r.exponentially_ergodic == row.x);
    CHECK(r.strongly_ergodic == row.s);
  }
}

TEST_CASE("undetermined tails classify as unknown") {
  const auto r = classify(SigmaProfile::expression("exp(abs(x)^0.3)"), 1.5);
  CHECK(r.ergodic == Verdict::unknown);
  CHECK(r.strongly_ergodic == Verdict::unknown);
  CHECK(!r.notes.empty());
  CHECK(r.to_json()["I"]["unknown"] == true);
}

TEST_CASE("implication chain on random expression profiles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> g(0.3, 3.0), a(1.1, 1.9), c(0.2, 5.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double gm = g(rng), gp = g(rng), alpha = a(rng), scale = c(rng);
    const std::string text = std::to_string(scale) + "*max(1+x, 1)^" + std::to_string(gp) + " + max(1-x, 1)^" +
                             std::to_string(gm);
    CAPTURE(text);
    const auto r = classify(SigmaProfile::expression(text), alpha);
    if (r.strongly_ergodic == Verdict::yes) CHECK(r.exponentially_ergodic == Verdict::yes);
    if (r.exponentially_ergodic == Verdict::yes) CHECK(r.ergodic == Verdict::yes);
  }
}

TEST_CASE("rate bounds for poly:2 at alpha 1.5") {
  const auto b = rate_bounds(SigmaProfile::polynomial(2.0), 1.5);
  REQUIRE(b.lambda1_lower);
  CHECK(*b.lambda1_lower == doctest::Approx(1.0 / (4.0 * kOmega15 * 0.32475952641916450)).epsilon(1e-8));
  CHECK(*b.lambda1_lower == doctest::Approx(0.4824).epsilon(1e-4));
  CHECK(*b.lambda0_lower == *b.lambda1_lower);
  CHECK(*b.lambda0_upper == doctest::Approx(15.437).epsilon(1e-4));
  CHECK(*b.kappa_lower == doctest::Approx(1.0 / (kOmega15 * std::numbers::pi / 4)).epsilon(1e-8));
  CHECK(*b.kappa_lower == doctest::Approx(0.79788).epsilon(1e-5));
  CHECK(*b.lambda0_halfline_lower == doctest::Approx(1.1559677026552158).epsilon(1e-8));
  CHECK(*b.lambda0_lower <= *b.lambda0_upper);
}

TEST_CASE("rate bounds at the gamma = 1 boundary") {
  const auto b = rate_bounds(SigmaProfile::polynomial(1.0), 1.5);
  CHECK(*b.lambda0_lower == doctest::Approx(0.5 / (8.0 * kOmega15)).epsilon(1e-12));
  CHECK(*b.lambda0_lower == doctest::Approx(0.039164).epsilon(1e-4));
  // (2/omega)(1/delta_+ + 1/delta_-) with delta_+- = 1/(alpha-1)
  CHECK(*b.lambda0_upper == doctest::Approx(4.0 * 0.5 / kOmega15).epsilon(1e-12));
  CHECK(!b.kappa_lower);
}

TEST_CASE("no bounds without finite criteria") {
  const auto b = rate_bounds(SigmaProfile::expression("1"), 1.5);
  CHECK(b.empty());
  CHECK(b.to_json()["kappa_lower"]["absent"] == true);
}

TEST_CASE("even profiles give the sandwich ratio 32") {
  for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
    for (double alpha : {1.2, 1.5, 1.8}) {
      const auto b = rate_bounds(SigmaProfile::polynomial(gamma), alpha);
      CHECK(std::abs(*b.lambda0_upper / *b.lambda0_lower - 32.0) <= 32.0 * 1e-10);
    }
  }
}

TEST_CASE("quadrature and closed-form routes agree") {
  for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
    for (double alpha : {1.2, 1.5, 1.8}) {
      CAPTURE(gamma);
      CAPTURE(alpha);
      const auto closed = polynomial_closed_forms(gamma, alpha);
      const auto report = classify(SigmaProfile::polynomial(gamma), alpha);
      CHECK(report.delta_plus->value == doctest::Approx(closed.delta_plus.value).epsilon(1e-5));
      CHECK(report.delta->value == doctest::Approx(closed.delta.value).epsilon(1e-5));
      const auto numeric = rate_bounds(report, AlphaConstants(alpha));
      CHECK(*numeric.lambda0_lower == doctest::Approx(*closed.general_bounds.lambda0_lower).epsilon(1e-5));
      CHECK(*numeric.lambda0_upper == doctest::Approx(*closed.general_bounds.lambda0_upper).epsilon(1e-5));
      CHECK(report.mu_total->value == doctest::Approx(closed.mu_total.value).epsilon(1e-8));
      if (gamma > 1.0) CHECK(report.I->value == doctest::Approx(closed.I.value).epsilon(1e-8));
    }
  }
}

TEST_CASE("polynomial closed forms") {
  const auto c2 = polynomial_closed_forms(2.0, 1.5);
  CHECK(c2.delta_plus.value == doctest::Approx(std::pow(2.0, -0.5) * std::pow(1.5, 1.5) / 8.0).epsilon(1e-14));
  CHECK(*c2.kappa_lower_poly == doctest::Approx(0.46999).epsilon(1e-4));
  CHECK(*c2.kappa_lower_from_I == doctest::Approx(0.79788).epsilon(1e-5));
  // 1/(omega I) is the sharper one
  CHECK(*c2.kappa_lower_from_I >= *c2.kappa_lower_poly);
  CHECK(c2.I.value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-13));

  const auto c1 = polynomial_closed_forms(1.0, 1.5);
  CHECK(c1.delta_plus.value == 2.0);
  CHECK(*c1.lambda0_lower == doctest::Approx(0.039164).epsilon(1e-4));
  CHECK(*c1.lambda0_upper == doctest::Approx(0.62666).epsilon(1e-4));
  CHECK(!c1.kappa_lower_poly);

  const auto c07 = polynomial_closed_forms(0.7, 1.5);
  CHECK(!c07.delta_plus.finite());
  CHECK(!c07.lambda0_lower);
  CHECK_THROWS_AS(polynomial_closed_forms(0.6, 1.5), DomainError);
}

TEST_CASE("scaling sigma scales lower bounds by c^alpha") {
  const auto base = rate_bounds(SigmaProfile::polynomial(2.0), 1.5);
  const auto scaled = rate_bounds(SigmaProfile::polynomial(2.0).scaled(2.0), 1.5);
  const double f = std::pow(2.0, 1.5);
  CHECK(*scaled.lambda1_lower == doctest::Approx(f * *base.lambda1_lower).epsilon(1e-9));
  CHECK(*scaled.kappa_lower == doctest::Approx(f * *base.kappa_lower).epsilon(1e-9));
  CHECK(*scaled.lambda0_halfline_lower == doctest::Approx(f * *base.lambda0_halfline_lower).epsilon(1e-9));
}

TEST_CASE("Lyapunov growth conditions") {
  const auto l1 = lyapunov_check(SigmaProfile::polynomial(1.0), 1.5);
  CHECK(l1.a1 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(l1.exponential_sufficient);
  CHECK(!l1.strong_sufficient);

  const auto l2 = lyapunov_check(SigmaProfile::polynomial(2.0), 1.5);
  REQUIRE(l2.a2_gamma);
  CHECK(*l2.a2_gamma == 2.0);
  CHECK(*l2.a2 > 0.0);
  CHECK(l2.strong_sufficient);

  const auto l0 = lyapunov_check(SigmaProfile::expression("1"), 1.5);
  CHECK(l0.a1 == 0.0);
  CHECK(l0.verdict == "inconclusive");
}

TEST_CASE("report JSON encodes infinity explicitly") {
  const auto r = classify(SigmaProfile::polynomial(1.0), 1.5);
  const auto j = r.to_json();
  CHECK(j["I"]["infinite"] == true);
  CHECK(j["strongly_ergodic"] == "no");
  CHECK(j["delta_plus"]["value"] == 2.0);
}
