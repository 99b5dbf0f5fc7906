// stable-ergo: ergodicity criteria, rate bounds, Dirichlet eigenvalues and
// Monte Carlo checks for dY = sigma(Y-) dX with X symmetric alpha-stable.
//
// Exit codes: 0 ok, 1 invalid configuration, 2 classification unknown,
// 3 numerical failure, 4 validation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stable_ergo/acceptance.hpp"
#include "stable_ergo/criteria.hpp"
#include "stable_ergo/errors.hpp"
#include "stable_ergo/green.hpp"
#include "stable_ergo/montecarlo.hpp"
#include "stable_ergo/parallel.hpp"
#include "stable_ergo/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stable_ergo;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

enum Exit { kOk = 0, kConfig = 1, kUnknown = 2, kNumeric = 3, kValidation = 4 };

struct Common {
  std::string sigma;
  std::vector<double> tails;  // tail exponents for CSV tables
  double alpha = 1.5;
  std::string out_dir;
  std::string format = "json";
};

struct Run {
  std::string command;
  json config;  // resolved options, echoed in the manifest
  json result;
  std::string csv;  // set when the command has a table form
  std::vector<std::pair<std::string, std::string>> files;  // extra dumps for --out
  int exit_code = kOk;
};

void add_common(CLI::App* app, Common& c, bool needs_sigma = true) {
  auto* s = app->add_option("--sigma", c.sigma, "profile: poly:<gamma> | expr:<text> | table:<path>");
  if (needs_sigma) s->required();
  app->add_option("--tails", c.tails, "tail exponents gamma_-,gamma_+ of a CSV table")->delimiter(',')->expected(2);
  app->add_option("--alpha", c.alpha, "stability index in (1,2)")->capture_default_str();
  app->add_option("--out", c.out_dir, "directory for manifest.json and result files");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

SigmaProfile load_profile(const Common& c) {
  std::optional<TailExponents> tails;
  if (c.tails.size() == 2) tails = TailExponents{c.tails[0], c.tails[1]};
  return parse_sigma_spec(c.sigma, tails);
}

json common_json(const Common& c, const std::optional<SigmaProfile>& p) {
  json j = {{"alpha", c.alpha}, {"format", c.format}};
  if (p) {
    j["sigma"] = c.sigma;
    j["profile"] = p->to_json();
  }
  if (!c.tails.empty()) j["tails"] = c.tails;
  return j;
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// key,value rows for commands without a natural table
void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q;
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      s = "\"" + q + "\"";
    }
    os << prefix << ',' << s << '\n';
  } else if (j.is_number_float()) {
    os << prefix << ',' << number(j.get<double>()) << '\n';
  } else {
    os << prefix << ',' << j.dump() << '\n';
  }
}

json manifest(const Run& run) {
  return {{"schema_version", kSchemaVersion},
          {"tool", "stable-ergo"},
          {"version", kToolVersion},
          {"command", run.command},
          {"config", run.config},
          {"mass_convention", "unnormalized speed measure mu = sigma^-alpha dx"}};
}

void emit(const Run& run, const Common& c) {
  const json doc = {{"schema_version", kSchemaVersion}, {"manifest", manifest(run)}, {"result", run.result}};
  std::string text;
  if (c.format == "csv") {
    if (!run.csv.empty()) {
      text = run.csv;
    } else {
      std::ostringstream os;
      os << "key,value\n";
      flatten(run.result, "", os);
      text = os.str();
    }
  } else {
    text = doc.dump(2) + "\n";
  }
  std::cout << text << std::flush;
  if (c.out_dir.empty()) return;
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw DomainError("cannot write " + (dir / name).string());
    f << body;
  };
  write("manifest.json", manifest(run).dump(2) + "\n");
  write(c.format == "csv" ? "result.csv" : "result.json", text);
  for (const auto& [name, body] : run.files) write(name, body);
}

// ---- classify / bounds --------------------------------------------------

Run cmd_classify(const Common& c) {
  const SigmaProfile p = load_profile(c);
  Run run{"classify", common_json(c, p), {}, {}, {}, kOk};
  const ErgodicityReport rep = classify(p, c.alpha);
  run.result = rep.to_json();
  run.result["lyapunov"] = lyapunov_check(p, c.alpha).to_json();
  if (rep.ergodic == Verdict::unknown || rep.exponentially_ergodic == Verdict::unknown ||
      rep.strongly_ergodic == Verdict::unknown) {
    run.exit_code = kUnknown;
  }
  return run;
}

Run cmd_bounds(const Common& c) {
  const SigmaProfile p = load_profile(c);
  Run run{"bounds", common_json(c, p), {}, {}, {}, kOk};
  const ErgodicityReport rep = classify(p, c.alpha);
  const RateBounds b = rate_bounds(rep, AlphaConstants(c.alpha));
  run.result = {{"bounds", b.to_json()}};
  if (b.empty()) run.result["note"] = "no bound applies: every governing criterion is infinite or unknown";
  if (p.kind() == SigmaProfile::Kind::polynomial && p.scale() == 1.0 && p.gamma() * c.alpha > 1) {
    run.result["polynomial_closed_forms"] = polynomial_closed_forms(p.gamma(), c.alpha).to_json();
  }
  return run;
}

// ---- eigen ---------------------------------------------------------------

struct EigenArgs {
  std::string domain = "punctured";
  std::vector<double> R{10, 25, 50};
  Index n = 2000;
  std::optional<double> grading;
  bool eigvec = false;
};

Run cmd_eigen(const Common& c, const EigenArgs& a) {
  const SigmaProfile p = load_profile(c);
  const KillingSet B = killing_set_from_string(a.domain);
  Run run{"eigen", common_json(c, p), {}, {}, {}, kOk};
  run.config["domain"] = a.domain;
  run.config["R"] = a.R;
  run.config["n"] = a.n;
  const double grading = a.grading.value_or(default_grading(B));
  run.config["grading"] = grading;

  const auto series = lambda0_numeric(p, c.alpha, B, a.R, a.n, {}, grading);
  json rows = json::array();
  std::ostringstream csv;
  csv << "R,n,lambda0,residual\n";
  bool monotone = true;
  for (std::size_t i = 0; i < series.size(); ++i) {
    rows.push_back(series[i].to_json());
    csv << number(series[i].R) << ',' << series[i].n << ',' << number(series[i].lambda0) << ','
        << number(series[i].residual) << '\n';
    if (i > 0) monotone = monotone && series[i].lambda0 <= series[i - 1].lambda0 * (1 + 1e-3);
    if (a.eigvec) {
      std::ostringstream v;
      v << "x,value\n";
      const Grid grid(series[i].R, a.n, B, grading);
      const auto nodes = grid.active_nodes();
      for (std::size_t k = 0; k < nodes.size(); ++k) v << number(grid.node(nodes[k])) << ',' << number(series[i].eigvec(Index(k))) << '\n';
      run.files.emplace_back("eigvec_R" + number(series[i].R) + ".csv", v.str());
    }
  }
  const double last = series.back().lambda0;
  const RateBounds b = rate_bounds(p, c.alpha);
  std::string verdict;
  if (B == KillingSet::point_zero && b.lambda0_lower && b.lambda0_upper) {
    const bool inside = last >= *b.lambda0_lower && last <= *b.lambda0_upper;
    verdict = std::string(inside ? "inside sandwich" : "outside sandwich") + " [" + number(*b.lambda0_lower) + ", " +
              number(*b.lambda0_upper) + "]";
  } else if (B == KillingSet::negative_halfline && b.lambda0_halfline_lower) {
    verdict = std::string(last >= *b.lambda0_halfline_lower ? "above" : "below") + " half-line lower bound " +
              number(*b.lambda0_halfline_lower);
  } else {
    verdict = "no closed-form bound for this domain";
  }
  run.result = {{"series", rows}, {"monotone_in_R", monotone}, {"verdict", verdict}};
  run.csv = csv.str();
  if (c.format == "csv") std::cerr << "verdict: " << verdict << (monotone ? "" : " (not monotone in R)") << '\n';
  return run;
}

// ---- green ---------------------------------------------------------------

struct GreenArgs {
  std::string domain = "punctured";
  std::vector<double> x, y;
  bool ii = false;
};

Run cmd_green(const Common& c, const GreenArgs& a) {
  const AlphaConstants k(c.alpha);
  if (a.ii) {
    if (c.sigma.empty()) throw DomainError("--ii needs --sigma");
    const SigmaProfile p = load_profile(c);
    Run run{"green", common_json(c, p), {}, {}, {}, kOk};
    run.config["x"] = a.x;
    run.config["ii"] = true;
    const CriterionValue d = delta(p, c.alpha), dp = delta_plus(p, c.alpha);
    json rows = json::array();
    std::ostringstream csv;
    csv << "x,ii,ii_plus\n";
    for (double x : a.x) {
      const double v = ii_operator(p, k, x);
      json row = {{"x", x}, {"ii", v}};
      std::string plus = "";
      if (x > 0) {
        const double w = ii_plus_operator(p, k, x);
        row["ii_plus"] = w;
        plus = number(w);
      }
      rows.push_back(row);
      csv << number(x) << ',' << number(v) << ',' << plus << '\n';
    }
    json bounds = {{"ii", d.finite() ? json(4 * k.omega * d.value) : json({{"infinite", true}, {"reason", d.divergence_reason}})},
                   {"ii_plus", dp.finite() ? json(4 * dp.value / ((c.alpha - 1) * k.gamma_half * k.gamma_half))
                                           : json({{"infinite", true}, {"reason", dp.divergence_reason}})}};
    run.result = {{"values", rows}, {"bounds", bounds}};
    run.csv = csv.str();
    return run;
  }
  const GreenKernel kernel = GreenKernel::for_domain(killing_set_from_string(a.domain), k);
  Run run{"green", common_json(c, std::nullopt), {}, {}, {}, kOk};
  run.config["domain"] = a.domain;
  run.config["x"] = a.x;
  run.config["y"] = a.y;
  json rows = json::array();
  std::ostringstream csv;
  csv << "x,y,G\n";
  for (double x : a.x) {
    for (double y : a.y) {
      const double g = kernel.in_domain(x) && kernel.in_domain(y) ? kernel(x, y) : 0.0;
      rows.push_back({{"x", x}, {"y", y}, {"G", g}});
      csv << number(x) << ',' << number(y) << ',' << number(g) << '\n';
    }
  }
  run.result = {{"kernel", a.domain}, {"values", rows}};
  run.csv = csv.str();
  return run;
}

// ---- simulate ------------------------------------------------------------

struct SimArgs {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  double dt = 1e-3;
  double horizon = 10.0;
  std::string scheme = "euler";
  Index paths = 1000;
  // hitting
  double x0 = 5.0;
  std::vector<double> eps{0.05};
  // stationary
  double burn_in = 0.2;
  double spacing = 0.5;
  Index bins = 40;
  double range = 10.0;
  // path
  double y0 = 0.0;
  // decay
  std::vector<double> x0_list{1.0, 3.0};
  Index points = 40;
  std::string f = "clip";
};

PathConfig path_config(const SimArgs& a) {
  PathConfig cfg;
  cfg.dt = a.dt;
  cfg.horizon = a.horizon;
  cfg.scheme = scheme_from_string(a.scheme);
  cfg.n_paths = a.paths;
  cfg.validate();
  return cfg;
}

json sim_config(const Common& c, const SigmaProfile& p, const SimArgs& a, const PathConfig& cfg) {
  json j = common_json(c, p);
  j["seed"] = a.seed;
  j["stream"] = a.stream;
  j["path_config"] = cfg.to_json();
  return j;
}

Run cmd_hitting(const Common& c, const SimArgs& a) {
  const SigmaProfile p = load_profile(c);
  const PathConfig cfg = path_config(a);
  Run run{"simulate hitting", sim_config(c, p, a, cfg), {}, {}, {}, kOk};
  run.config["x0"] = a.x0;
  run.config["eps"] = a.eps;
  const StableSampler sampler(c.alpha, a.seed, a.stream);
  const AlphaConstants k(c.alpha);
  const CriterionValue I = I_integral(p, c.alpha);
  json rows = json::array();
  std::ostringstream csv;
  csv << "epsilon,mean,stderr,n_hit,n_censored\n";
  std::string verdict;
  for (double e : a.eps) {
    const HittingEstimate h = estimate_hitting_time(p, c.alpha, a.x0, e, cfg, sampler);
    rows.push_back(h.to_json());
    csv << number(e) << ',' << number(h.mean) << ',' << number(h.std_error) << ',' << h.n_hit << ',' << h.n_censored
        << '\n';
    if (I.finite()) {
      const double bound = k.omega * I.value;
      verdict = (h.mean <= bound + 3 * h.std_error ? "within" : "exceeds") + std::string(" omega I + 3 stderr = ") +
                number(bound) + " + 3 x " + number(h.std_error) + " at epsilon " + number(e);
    }
  }
  run.result = {{"estimates", rows},
                {"bound", I.finite() ? json(k.omega * I.value) : json({{"infinite", true}, {"reason", I.divergence_reason}})},
                {"verdict", I.finite() ? verdict : "I is infinite: no bound to compare against"}};
  run.csv = csv.str();
  return run;
}

Run cmd_stationary(const Common& c, const SimArgs& a) {
  const SigmaProfile p = load_profile(c);
  const PathConfig cfg = path_config(a);
  Run run{"simulate stationary", sim_config(c, p, a, cfg), {}, {}, {}, kOk};
  StationaryOptions o;
  o.y0 = a.y0;
  o.burn_in_fraction = a.burn_in;
  o.sample_spacing = a.spacing;
  o.bins = a.bins;
  o.range = a.range;
  run.config["stationary"] = {{"y0", o.y0}, {"burn_in_fraction", o.burn_in_fraction},
                              {"sample_spacing", o.sample_spacing}, {"bins", o.bins}, {"range", o.range}};
  const StationaryEstimate est = estimate_stationary(p, c.alpha, cfg, StableSampler(c.alpha, a.seed, a.stream), o);
  run.result = est.to_json();
  run.result["verdict"] = est.ks_distance <= 0.05 ? "KS <= 0.05" : "KS > 0.05";
  run.csv = est.histogram.to_csv();
  run.files.emplace_back("histogram.csv", run.csv);
  return run;
}

Run cmd_path(const Common& c, const SimArgs& a) {
  const SigmaProfile p = load_profile(c);
  SimArgs one = a;
  one.paths = 1;
  const PathConfig cfg = path_config(one);
  Run run{"simulate path", sim_config(c, p, one, cfg), {}, {}, {}, kOk};
  run.config["y0"] = a.y0;
  StableSampler s = StableSampler(c.alpha, a.seed, a.stream).for_path(0);
  const Path path = simulate(p, c.alpha, a.y0, cfg, s);
  run.result = {{"steps", path.t.size()}, {"diverged", path.diverged}, {"final", path.y.back()}};
  run.csv = path.to_csv();
  run.files.emplace_back("path.csv", run.csv);
  return run;
}

Run cmd_decay(const Common& c, const SimArgs& a) {
  const SigmaProfile p = load_profile(c);
  const PathConfig cfg = path_config(a);
  Run run{"simulate decay", sim_config(c, p, a, cfg), {}, {}, {}, kOk};
  run.config["x0"] = a.x0_list;
  run.config["points"] = a.points;
  run.config["f"] = a.f;
  std::function<double(double)> f;
  if (a.f == "clip") {
    f = [](double x) { return x > 0 ? std::min(x, 1.0) : std::max(x, -1.0); };
  } else if (a.f == "sign") {
    f = [](double x) { return double((x > 0) - (x < 0)); };
  } else {
    f = [](double) { return 1.0; };
  }
  DecayOptions o;
  o.time_points = a.points;
  const DecayEstimate est = estimate_decay_rate(p, c.alpha, f, a.x0_list, cfg, StableSampler(c.alpha, a.seed, a.stream), o);
  run.result = est.to_json();
  const RateBounds b = rate_bounds(p, c.alpha);
  if (b.lambda1_lower) {
    run.result["lambda1_lower"] = *b.lambda1_lower;
    run.result["verdict"] = est.rate >= 0.5 * *b.lambda1_lower ? "rate >= lambda1_lower / 2" : "rate < lambda1_lower / 2";
  }
  std::ostringstream csv;
  csv << "x0,t,signal,stderr\n";
  for (std::size_t g = 0; g < a.x0_list.size(); ++g) {
    for (std::size_t j = 0; j < est.times.size(); ++j) {
      csv << number(a.x0_list[g]) << ',' << number(est.times[j]) << ',' << number(est.signal[g][j]) << ','
          << number(est.noise[g][j]) << '\n';
    }
  }
  run.csv = csv.str();
  return run;
}

// ---- validate ------------------------------------------------------------

Run cmd_validate(const Common& c, bool quick, std::optional<double> omega, std::uint64_t seed) {
  Run run{"validate", {{"quick", quick}, {"seed", seed}}, {}, {}, {}, kOk};
  if (omega) run.config["omega_override"] = *omega;
  AcceptanceOptions o;
  o.quick = quick;
  o.omega_override = omega;
  o.seed = seed;
  const auto results = run_acceptance(o, [](const CriterionResult& r) { std::cerr << r.line() << '\n'; });
  json rows = json::array();
  std::ostringstream csv;
  csv << "id,status,seconds,title\n";
  std::vector<int> failed;
  for (const auto& r : results) {
    rows.push_back(r.to_json());
    csv << r.id << ',' << to_string(r.status) << ',' << number(r.seconds) << ',' << r.title << '\n';
    if (r.status == CriterionStatus::fail) failed.push_back(r.id);
  }
  run.result = {{"criteria", rows}, {"passed", failed.empty()}, {"failed", failed}};
  run.csv = csv.str();
  (void)c;
  if (!failed.empty()) {
    std::cerr << "failed criteria:";
    for (int id : failed) std::cerr << ' ' << id;
    std::cerr << '\n';
    run.exit_code = kValidation;
  }
  return run;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const AlphaOutOfRange*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const NotErgodic*>(&e)) {
    return kConfig;
  }
  if (dynamic_cast<const Error*>(&e)) return kNumeric;
  if (dynamic_cast<const json::exception*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return kConfig;
  return kNumeric;
}

const char* error_name(const std::exception& e) {
  if (dynamic_cast<const AlphaOutOfRange*>(&e)) return "AlphaOutOfRange";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const PreconditionError*>(&e)) return "PreconditionError";
  if (dynamic_cast<const NotErgodic*>(&e)) return "NotErgodic";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const GridTooCoarse*>(&e)) return "GridTooCoarse";
  if (dynamic_cast<const IntegralDiverged*>(&e)) return "IntegralDiverged";
  if (dynamic_cast<const HorizonExceeded*>(&e)) return "HorizonExceeded";
  if (dynamic_cast<const AllCensored*>(&e)) return "AllCensored";
  if (dynamic_cast<const SignalTooNoisy*>(&e)) return "SignalTooNoisy";
  if (dynamic_cast<const TailUndetermined*>(&e)) return "TailUndetermined";
  if (dynamic_cast<const NonPositiveSigma*>(&e)) return "NonPositiveSigma";
  if (dynamic_cast<const EvalError*>(&e)) return "EvalError";
  return "Error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ergodicity criteria, rate bounds and simulation for stable-driven SDEs dY = sigma(Y-) dX"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Common common;

  auto* classify_cmd = app.add_subcommand("classify", "ergodicity verdicts from mu(R), delta and I");
  add_common(classify_cmd, common);

  auto* bounds_cmd = app.add_subcommand("bounds", "rate bounds, with closed forms for poly profiles");
  add_common(bounds_cmd, common);

  EigenArgs eig;
  auto* eigen_cmd = app.add_subcommand("eigen", "numerical Dirichlet eigenvalue on truncated domains");
  add_common(eigen_cmd, common);
  eigen_cmd->add_option("--domain", eig.domain, "punctured | halfline | interval-complement")
      ->check(CLI::IsMember({"punctured", "halfline", "interval-complement"}))
      ->capture_default_str();
  eigen_cmd->add_option("--R", eig.R, "increasing truncation radii")->delimiter(',');
  eigen_cmd->add_option("--n", eig.n, "cells on [-R,R] (even, at most 4096)")->capture_default_str();
  eigen_cmd->add_option("--grading", eig.grading, "mesh grading toward 0 in [1,4]; 1 gives equal cells");
  eigen_cmd->add_flag("--eigvec", eig.eigvec, "also write eigvec_R<R>.csv files to --out");

  GreenArgs gr;
  auto* green_cmd = app.add_subcommand("green", "killed Green kernels, or the II operators with --ii");
  add_common(green_cmd, common, false);
  green_cmd->add_option("--domain", gr.domain, "punctured | halfline | interval-complement")
      ->check(CLI::IsMember({"punctured", "halfline", "interval-complement"}))
      ->capture_default_str();
  green_cmd->add_option("--x", gr.x)->delimiter(',')->required();
  green_cmd->add_option("--y", gr.y)->delimiter(',');
  green_cmd->add_flag("--ii", gr.ii, "evaluate II(sqrt h0)(x) and II+(phi)(x) for --sigma");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimates");
  sim_cmd->require_subcommand(1);
  auto sim_common = [&](CLI::App* cmd) {
    add_common(cmd, common);
    cmd->add_option("--seed", sim.seed)->capture_default_str();
    cmd->add_option("--stream", sim.stream)->capture_default_str();
    cmd->add_option("--dt", sim.dt)->capture_default_str();
    cmd->add_option("--horizon", sim.horizon)->capture_default_str();
    cmd->add_option("--scheme", sim.scheme)->check(CLI::IsMember({"euler", "timechange"}))->capture_default_str();
    cmd->add_option("--paths", sim.paths)->capture_default_str();
  };
  auto* hit_cmd = sim_cmd->add_subcommand("hitting", "mean entrance time of [-eps, eps]");
  sim_common(hit_cmd);
  hit_cmd->add_option("--x0", sim.x0)->capture_default_str();
  hit_cmd->add_option("--eps", sim.eps, "one or more target half-widths")->delimiter(',');
  auto* stat_cmd = sim_cmd->add_subcommand("stationary", "occupation histogram and KS distance to pi");
  sim_common(stat_cmd);
  stat_cmd->add_option("--y0", sim.y0)->capture_default_str();
  stat_cmd->add_option("--burn-in", sim.burn_in, "fraction of the horizon")->capture_default_str();
  stat_cmd->add_option("--spacing", sim.spacing)->capture_default_str();
  stat_cmd->add_option("--bins", sim.bins)->capture_default_str();
  stat_cmd->add_option("--range", sim.range)->capture_default_str();
  auto* path_cmd = sim_cmd->add_subcommand("path", "one path as CSV (t, y)");
  sim_common(path_cmd);
  path_cmd->add_option("--y0", sim.y0)->capture_default_str();
  auto* decay_cmd = sim_cmd->add_subcommand("decay", "fitted decay rate of E_x f(Y_t) - pi(f)");
  sim_common(decay_cmd);
  decay_cmd->add_option("--x0", sim.x0_list)->delimiter(',');
  decay_cmd->add_option("--points", sim.points)->capture_default_str();
  decay_cmd->add_option("--f", sim.f, "clip | sign | const")->check(CLI::IsMember({"clip", "sign", "const"}))->capture_default_str();

  bool quick = false;
  std::optional<double> omega_override;
  std::uint64_t validate_seed = 12345;
  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance suite");
  validate_cmd->add_flag("--quick", quick, "skip the long-running criteria");
  validate_cmd->add_option("--seed", validate_seed)->capture_default_str();
  validate_cmd->add_option("--out", common.out_dir);
  validate_cmd->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));
  validate_cmd->add_option("--inject-omega", omega_override, "test hook: wrong omega_alpha on the bound side")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    Run run;
    if (*classify_cmd) {
      run = cmd_classify(common);
    } else if (*bounds_cmd) {
      run = cmd_bounds(common);
    } else if (*eigen_cmd) {
      run = cmd_eigen(common, eig);
    } else if (*green_cmd) {
      run = cmd_green(common, gr);
    } else if (*hit_cmd) {
      run = cmd_hitting(common, sim);
    } else if (*stat_cmd) {
      run = cmd_stationary(common, sim);
    } else if (*path_cmd) {
      run = cmd_path(common, sim);
    } else if (*decay_cmd) {
      run = cmd_decay(common, sim);
    } else {
      run = cmd_validate(common, quick, omega_override, validate_seed);
    }
    run.config["threads"] = worker_count();
    emit(run, common);
    return run.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error [" << error_name(e) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
