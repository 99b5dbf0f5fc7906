#include "stable_ergo/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "stable_ergo/criteria.hpp"
#include "stable_ergo/errors.hpp"
#include "stable_ergo/green.hpp"
#include "stable_ergo/measure.hpp"
#include "stable_ergo/montecarlo.hpp"
#include "stable_ergo/spectral.hpp"

namespace stable_ergo {

const char* to_string(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::pass:
      return "PASS";
    case CriterionStatus::fail:
      return "FAIL";
    case CriterionStatus::skip:
      return "SKIP";
  }
  return "?";
}

std::string CriterionResult::line() const {
  std::ostringstream os;
  os << "criterion " << std::setw(2) << id << "  " << to_string(status) << "  " << std::fixed << std::setprecision(1)
     << std::setw(7) << seconds << "s  " << title << ": " << detail;
  return os.str();
}

nlohmann::json CriterionResult::to_json() const {
  std::string s = to_string(status);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return {{"id", id},       {"title", title},     {"status", s},
          {"detail", detail}, {"seconds", seconds}, {"budget_seconds", budget_seconds}};
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CriterionResult& r) { return r.status == CriterionStatus::fail; });
}

namespace {

// A check fills the detail text and returns whether its condition holds.
using Check = std::function<bool(std::ostringstream&)>;

struct Criterion {
  int id;
  const char* title;
  double budget;
  bool long_running;
  Check check;
};

std::string sci(double v, int digits = 3) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> log_points(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return xs;
}

// ---- 1 -------------------------------------------------------------------
bool delta_plus_closed_form(std::ostringstream& os) {
  double worst = 0.0;
  bool ok = true;
  for (double gamma : {1.5, 2.0, 3.0}) {
    for (double alpha : {1.2, 1.5, 1.8}) {
      const double v = delta_plus(SigmaProfile::polynomial(gamma), alpha).value;
      const double ag = alpha * (gamma - 1);
      const double exact = std::pow(alpha - 1, alpha - 1) * std::pow(ag, ag) / std::pow(alpha * gamma - 1, alpha * gamma);
      worst = std::max(worst, rel_err(v, exact));
    }
  }
  ok = worst <= 1e-6;
  bool exact_at_one = true;
  for (double alpha : {1.2, 1.5, 1.8}) {
    exact_at_one = exact_at_one && delta_plus(SigmaProfile::polynomial(1.0), alpha).value == 1 / (alpha - 1);
  }
  os << "max rel err " << sci(worst) << " over 9 cases (tol 1e-6); gamma=1 gives 1/(alpha-1) "
     << (exact_at_one ? "exactly" : "NOT exactly");
  return ok && exact_at_one;
}

// ---- 2 -------------------------------------------------------------------
bool i_integral_oracle(std::ostringstream& os) {
  const double v = I_integral(SigmaProfile::polynomial(2.0), 1.5).value;
  const double err = rel_err(v, std::numbers::pi / 4);
  os << "I = " << std::setprecision(15) << v << ", rel err " << sci(err) << " (tol 1e-8)";
  return err <= 1e-8;
}

// ---- 3 -------------------------------------------------------------------
bool classification_table(std::ostringstream& os) {
  struct Row {
    double gamma;
    Verdict e, x, s;
  };
  const Row rows[] = {{0.5, Verdict::no, Verdict::no, Verdict::no},
                      {0.7, Verdict::yes, Verdict::no, Verdict::no},
                      {1.0, Verdict::yes, Verdict::yes, Verdict::no},
                      {2.0, Verdict::yes, Verdict::yes, Verdict::yes}};
  bool ok = true;
  for (const Row& r : rows) {
    const ErgodicityReport rep = classify(SigmaProfile::polynomial(r.gamma), 1.5);
    const bool match = rep.ergodic == r.e && rep.exponentially_ergodic == r.x && rep.strongly_ergodic == r.s;
    ok = ok && match;
    os << "gamma=" << r.gamma << " (" << to_string(rep.ergodic) << ',' << to_string(rep.exponentially_ergodic) << ','
       << to_string(rep.strongly_ergodic) << ")" << (match ? "" : " MISMATCH") << (r.gamma == 2.0 ? "" : "; ");
  }
  return ok;
}

// ---- 4 -------------------------------------------------------------------
bool sandwich_ratio(std::ostringstream& os) {
  double worst = 0.0;
  for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
    for (double alpha : {1.2, 1.5, 1.8}) {
      const RateBounds b = rate_bounds(SigmaProfile::polynomial(gamma), alpha);
      if (!b.lambda0_lower || !b.lambda0_upper) return os << "bounds missing for gamma=" << gamma, false;
      worst = std::max(worst, std::abs(*b.lambda0_upper / *b.lambda0_lower - 32) / 32);
    }
  }
  os << "upper/lower = 32 within rel " << sci(worst) << " over 12 even profiles (tol 1e-10)";
  return worst <= 1e-10;
}

// ---- 5 -------------------------------------------------------------------
bool green_inequalities(std::ostringstream& os, const AcceptanceOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> expo(-3.0, 3.0), coin(0.0, 1.0);
  const int n = 10000;
  long violations = 0;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const AlphaConstants k(alpha);
    const double omega = opt.omega_override.value_or(k.omega);
    const double g2 = k.gamma_half * k.gamma_half;
    for (int i = 0; i < n; ++i) {
      const double ax = std::pow(10.0, expo(rng)), ay = std::pow(10.0, expo(rng));
      const double x = coin(rng) < 0.5 ? -ax : ax;
      const double y = coin(rng) < 0.5 ? -ay : ay;
      const double m = std::pow(std::min(ax, ay), alpha - 1);
      const double g = green_punctured(x, y, k);
      if (g - omega * m > 1e-12 * std::max(1.0, omega * m)) ++violations;
      if (x * y > 0 && (omega / 2) * m - g > 1e-12 * std::max(1.0, omega * m)) ++violations;
      const double gh = (alpha - 1) * g2 * green_halfline(ax, ay, k);
      if (gh - m > 1e-12 * std::max(1.0, m)) ++violations;
    }
  }
  os << violations << " violations over 3 x " << n << " random pairs";
  if (opt.omega_override) os << " (omega overridden to " << *opt.omega_override << ")";
  return violations == 0;
}

// ---- 6 -------------------------------------------------------------------
bool ii_bounds(std::ostringstream& os, const AcceptanceOptions& opt) {
  const AlphaConstants k(1.5);
  const double omega = opt.omega_override.value_or(k.omega);
  const std::vector<double> xs = log_points(1e-3, 1e3, 50);
  bool ok = true;
  for (double gamma : {2.0, 1.5}) {
    const auto p = SigmaProfile::polynomial(gamma);
    const double d = delta(p, 1.5).value;
    const double dp = delta_plus(p, 1.5).value;
    const double bound_ii = 4 * omega * d;
    const double bound_plus = 4 * dp / ((k.alpha - 1) * k.gamma_half * k.gamma_half);
    double worst_ii = 0.0, worst_plus = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = i % 2 == 0 ? xs[i] : -xs[i];
      worst_ii = std::max(worst_ii, ii_operator(p, k, x) / bound_ii);
      worst_plus = std::max(worst_plus, ii_plus_operator(p, k, xs[i]) / bound_plus);
    }
    const bool fine = worst_ii <= 1 + 1e-6 && worst_plus <= 1 + 1e-6;
    ok = ok && fine;
    os << "poly:" << gamma << " max II/bound " << sci(worst_ii, 4) << ", max II+/bound " << sci(worst_plus, 4)
       << (gamma == 2.0 ? "; " : "");
  }
  return ok;
}

// ---- 7 -------------------------------------------------------------------
bool eigen_sandwich(std::ostringstream& os) {
  const auto p = SigmaProfile::polynomial(2.0);
  const AlphaConstants k(1.5);
  const RateBounds b = rate_bounds(p, 1.5);
  const auto series = lambda0_numeric(p, 1.5, KillingSet::point_zero, {10.0, 25.0, 50.0}, 2000);
  const double lam = series.back().lambda0;
  const double var = variational_lower(p, k, KillingSet::point_zero);
  const double ray = rayleigh_upper(p, k, {0.3, 1.0, 3.0, 10.0}).value;
  const bool inside = lam >= 0.9 * *b.lambda0_lower && lam <= 1.1 * *b.lambda0_upper;
  const bool ordered = var <= 1.1 * lam && lam <= 1.1 * ray;
  bool monotone = true;
  for (std::size_t i = 1; i < series.size(); ++i) monotone = monotone && series[i].lambda0 <= series[i - 1].lambda0 * (1 + 1e-3);
  os << std::setprecision(5) << "lambda0(R=10,25,50) = " << series[0].lambda0 << ", " << series[1].lambda0 << ", " << lam
     << (monotone ? " nonincreasing" : " NOT monotone") << "; sandwich [" << *b.lambda0_lower << ", "
     << *b.lambda0_upper << "]" << (inside ? "" : " VIOLATED") << "; variational " << var << " <= " << lam
     << " <= Rayleigh " << ray << (ordered ? "" : " VIOLATED");
  return inside && ordered && monotone;
}

// ---- 8 -------------------------------------------------------------------
bool halfline_bound(std::ostringstream& os) {
  const auto p = SigmaProfile::polynomial(2.0);
  const RateBounds b = rate_bounds(p, 1.5);
  const double lam = lambda0_numeric(p, 1.5, KillingSet::negative_halfline, {50.0}, 2000).front().lambda0;
  const double lower = *b.lambda0_halfline_lower;
  os << std::setprecision(6) << "lambda0((0,inf)) = " << lam << " >= 0.9 x " << lower;
  return lam >= 0.9 * lower;
}

// ---- 9 -------------------------------------------------------------------
bool sampler_checks(std::ostringstream& os, const AcceptanceOptions& opt) {
  bool ok = true;
  for (double alpha : {1.2, 1.5, 1.8}) {
    StableSampler s(alpha, opt.seed, 9);
    const int n = 1'000'000;
    const double xi[3] = {0.5, 1.0, 2.0};
    double cf[3] = {0, 0, 0};
    long over10 = 0, over100 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = s.standard();
      for (int j = 0; j < 3; ++j) cf[j] += std::cos(xi[j] * x);
      over10 += std::abs(x) > 10;
      over100 += std::abs(x) > 100;
    }
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(cf[j] / n - std::exp(-std::pow(xi[j], alpha))));
    const double index = -std::log(double(over100) / double(over10)) / std::log(10.0);
    const bool fine = worst <= 4e-3 && std::abs(index - alpha) <= 0.1;
    ok = ok && fine;
    os << "alpha=" << alpha << " cf err " << sci(worst, 2) << " tail index " << sci(index, 4) << (alpha == 1.8 ? "" : "; ");
  }
  return ok;
}

// ---- 10 ------------------------------------------------------------------
bool hitting_bound(std::ostringstream& os, const AcceptanceOptions& opt) {
  const auto p = SigmaProfile::polynomial(2.0);
  const AlphaConstants k(1.5);
  const double bound = k.omega * I_integral(p, 1.5).value;
  PathConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 100.0;
  cfg.n_paths = 10000;
  const HittingEstimate h = estimate_hitting_time(p, 1.5, 5.0, 0.05, cfg, StableSampler(1.5, opt.seed, 10));
  os << std::setprecision(5) << "mean " << h.mean << " +- " << h.std_error << " (" << h.n_censored
     << " censored) <= omega I = " << bound;
  return h.mean <= bound + 3 * h.std_error;
}

// ---- 11 ------------------------------------------------------------------
bool stationarity(std::ostringstream& os, const AcceptanceOptions& opt) {
  PathConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 62.5;
  cfg.n_paths = 1000;
  const StationaryEstimate est =
      estimate_stationary(SigmaProfile::polynomial(2.0), 1.5, cfg, StableSampler(1.5, opt.seed, 11));
  os << "KS " << sci(est.ks_distance) << " with " << est.samples << " samples (tol 0.05)";
  return est.ks_distance <= 0.05 && est.samples >= 100000;
}

// ---- 12 ------------------------------------------------------------------
bool decay_soft_check(std::ostringstream& os, const AcceptanceOptions& opt) {
  const auto p = SigmaProfile::polynomial(2.0);
  const double target = 0.5 * *rate_bounds(p, 1.5).lambda1_lower;
  PathConfig cfg;
  cfg.dt = 2e-3;
  cfg.horizon = 1.2;
  cfg.n_paths = 20000;
  DecayOptions d;
  d.time_points = 24;
  auto f = [](double x) { return x > 0 ? std::min(x, 1.0) : std::max(x, -1.0); };
  const DecayEstimate est = estimate_decay_rate(p, 1.5, f, {1.0, 3.0}, cfg, StableSampler(1.5, opt.seed, 12), d);
  os << std::setprecision(4) << "fitted rate " << est.rate << " +- " << est.std_error << " >= " << target
     << " (one-sided sanity check)";
  return est.rate >= target;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            void (*on_result)(const CriterionResult&)) {
  const AcceptanceOptions& o = options;
  const std::vector<Criterion> criteria = {
      {1, "delta_+ closed form", 1, false, delta_plus_closed_form},
      {2, "I-integral oracle", 1, false, i_integral_oracle},
      {3, "classification table", 5, false, classification_table},
      {4, "sandwich ratio", 1, false, sandwich_ratio},
      {5, "Green inequalities", 10, false, [&](std::ostringstream& os) { return green_inequalities(os, o); }},
      {6, "II-operator bounds", 30, false, [&](std::ostringstream& os) { return ii_bounds(os, o); }},
      {7, "eigenvalue sandwich", 300, true, eigen_sandwich},
      {8, "half-line bound", 300, false, halfline_bound},
      {9, "stable sampler", 60, false, [&](std::ostringstream& os) { return sampler_checks(os, o); }},
      {10, "hitting-time bound", 300, true, [&](std::ostringstream& os) { return hitting_bound(os, o); }},
      {11, "stationarity", 300, true, [&](std::ostringstream& os) { return stationarity(os, o); }},
      {12, "decay-rate soft check", 600, true, [&](std::ostringstream& os) { return decay_soft_check(os, o); }},
  };

  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), c.id) == o.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget;
    if (o.quick && c.long_running) {
      r.status = CriterionStatus::skip;
      r.detail = "skipped in quick mode";
    } else {
      std::ostringstream os;
      const auto start = std::chrono::steady_clock::now();
      bool ok = false;
      try {
        ok = c.check(os);
      } catch (const std::exception& e) {
        os << (os.tellp() > 0 ? "; " : "") << "error: " << e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (r.seconds > c.budget) {
        ok = false;
        os << "; runtime over the " << c.budget << " s budget";
      }
      r.status = ok ? CriterionStatus::pass : CriterionStatus::fail;
      r.detail = os.str();
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace stable_ergo
