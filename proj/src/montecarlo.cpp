#include "stable_ergo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stable_ergo/errors.hpp"
#include "stable_ergo/measure.hpp"
#include "stable_ergo/parallel.hpp"

namespace stable_ergo {

const char* to_string(Scheme s) { return s == Scheme::euler ? "euler" : "timechange"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "euler") return Scheme::euler;
  if (name == "timechange") return Scheme::timechange;
  throw DomainError("unknown scheme '" + name + "' (expected euler or timechange)");
}

void PathConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and at least dt");
  if (n_paths < 1) throw DomainError("n_paths must be at least 1");
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
}

nlohmann::json PathConfig::to_json() const {
  return {{"dt", dt}, {"horizon", horizon}, {"scheme", to_string(scheme)}, {"n_paths", n_paths}, {"max_steps", max_steps}};
}

double Path::at(double time) const {
  if (t.empty() || time < t.front()) throw DomainError("path queried before its start");
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  return y[static_cast<std::size_t>(it - t.begin()) - 1];
}

std::string Path::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,y\n";
  for (std::size_t k = 0; k < t.size(); ++k) os << t[k] << ',' << y[k] << '\n';
  return os.str();
}

namespace {

// Advances y by one step and returns the elapsed intrinsic time. r is the local
// length scale: 1+|y| in the bulk, smaller near a hitting target.
class Stepper {
 public:
  Stepper(const SigmaProfile& profile, double alpha, const PathConfig& cfg)
      : profile_(profile), alpha_(alpha), dt_(cfg.dt), scheme_(cfg.scheme) {}

  double step(double& y, double r, StableSampler& sampler) const {
    const double sig = profile_(y);
    if (scheme_ == Scheme::euler) {
      const double dtk = dt_ * std::min(1.0, std::pow(r / sig, alpha_));
      y += sig * sampler.increment(dtk);
      return dtk;
    }
    const double s = dt_ * std::pow(r, alpha_);
    const double da = s * std::pow(sig, -alpha_);
    y += sampler.increment(s);
    return da;
  }

 private:
  const SigmaProfile& profile_;
  double alpha_;
  double dt_;
  Scheme scheme_;
};

bool escaped(double y) { return !std::isfinite(y) || std::abs(y) > kDivergenceLevel; }

// Calls visit(t_k, y_k, t_{k+1}) for every piece of the path on [0, horizon)
// until visit returns false. Returns false when the path diverged.
template <typename Scale, typename Visit>
bool walk(const Stepper& stepper, double y0, const PathConfig& cfg, StableSampler& sampler, Scale&& scale,
          Visit&& visit) {
  double t = 0.0, y = y0;
  for (std::int64_t k = 0; t < cfg.horizon; ++k) {
    if (k >= cfg.max_steps) {
      std::ostringstream os;
      os << "path reached t = " << t << " of horizon " << cfg.horizon << " after " << cfg.max_steps << " steps";
      throw HorizonExceeded(os.str());
    }
    double next = y;
    const double dtk = stepper.step(next, scale(y), sampler);
    if (!(dtk > 0.0)) return false;
    if (!visit(t, y, t + dtk)) return true;
    t += dtk;
    y = next;
    if (escaped(y)) return false;
  }
  visit(t, y, INFINITY);
  return true;
}

double bulk_scale(double y) { return 1.0 + std::abs(y); }

Path record(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg, StableSampler& sampler) {
  cfg.validate();
  require_alpha(alpha);
  Path path;
  const Stepper stepper(profile, alpha, cfg);
  path.diverged = !walk(stepper, y0, cfg, sampler, bulk_scale, [&](double t, double y, double) {
    path.t.push_back(t);
    path.y.push_back(y);
    return true;
  });
  return path;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double std_error_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / double(v.size() - 1) / double(v.size()));
}

}  // namespace

Path simulate_euler(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg,
                    StableSampler& sampler) {
  PathConfig c = cfg;
  c.scheme = Scheme::euler;
  return record(profile, alpha, y0, c, sampler);
}

Path simulate_timechange(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg,
                         StableSampler& sampler) {
  PathConfig c = cfg;
  c.scheme = Scheme::timechange;
  return record(profile, alpha, y0, c, sampler);
}

Path simulate(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg, StableSampler& sampler) {
  return record(profile, alpha, y0, cfg, sampler);
}

nlohmann::json HittingEstimate::to_json() const {
  return {{"mean", mean},         {"stderr", std_error}, {"n_hit", n_hit},
          {"n_censored", n_censored}, {"epsilon", epsilon}, {"x0", x0}};
}

HittingEstimate estimate_hitting_time(const SigmaProfile& profile, double alpha, double x0, double epsilon,
                                      const PathConfig& cfg, const StableSampler& sampler) {
  cfg.validate();
  require_alpha(alpha);
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  HittingEstimate out;
  out.epsilon = epsilon;
  out.x0 = x0;
  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> times(n);
  std::vector<char> hit(n, 0);
  if (std::abs(x0) <= epsilon) {
    std::fill(hit.begin(), hit.end(), 1);
  } else {
    const Stepper stepper(profile, alpha, cfg);
    // within a few epsilon of the target the step is sized to the distance
    auto scale = [epsilon](double y) {
      const double a = std::abs(y);
      return std::min(1.0 + a, std::max(a - epsilon, epsilon));
    };
    parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
      StableSampler s = sampler.for_path(static_cast<std::uint64_t>(i));
      const std::size_t j = static_cast<std::size_t>(i);
      times[j] = cfg.horizon;
      walk(stepper, x0, cfg, s, scale, [&](double t, double y, double) {
        if (t >= cfg.horizon) return false;
        if (std::abs(y) <= epsilon) {
          times[j] = t;
          hit[j] = 1;
          return false;
        }
        return true;
      });
    });
  }
  out.n_hit = std::count(hit.begin(), hit.end(), 1);
  out.n_censored = static_cast<Index>(n) - out.n_hit;
  if (out.n_hit == 0) {
    std::ostringstream os;
    os << "no path entered [-" << epsilon << ", " << epsilon << "] before the horizon " << cfg.horizon;
    throw AllCensored(os.str());
  }
  out.mean = mean_of(times);
  out.std_error = std_error_of(times, out.mean);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kLawInner = 1e-6;
constexpr double kLawOuter = 1e6;
constexpr int kLawPerDecade = 40;

}  // namespace

StationaryLaw::StationaryLaw(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec)
    : profile_(profile), alpha_(alpha), spec_(spec) {
  require_alpha(alpha);
  const CriterionValue mu = stable_ergo::mu_total(profile, alpha, spec);
  if (!mu.finite()) throw NotErgodic("the speed measure has infinite mass: " + mu.divergence_reason);
  mu_ = mu.value;
  const TailAnalysis tails = analyze_tails(profile, alpha);
  tail_power_minus_ = alpha * tails.minus.gamma;
  tail_power_plus_ = alpha * tails.plus.gamma;

  std::vector<double> pos{0.0};
  const int decades = static_cast<int>(std::lround(std::log10(kLawOuter / kLawInner)));
  for (int i = 0; i <= decades * kLawPerDecade; ++i) pos.push_back(kLawInner * std::pow(10.0, double(i) / kLawPerDecade));
  x_.reserve(2 * pos.size() - 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it > 0.0) x_.push_back(-*it);
  }
  x_.insert(x_.end(), pos.begin(), pos.end());

  auto rho = [&](double y) { return profile_.speed_density(y, alpha_); };
  std::vector<double> piece(x_.size() - 1);
  parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(piece.size()), [&](std::ptrdiff_t i) {
    const std::size_t j = static_cast<std::size_t>(i);
    piece[j] = gauss_kronrod<double>(rho, x_[j], x_[j + 1], spec_).value;
  });
  const double lower =
      integrate_upper_tail<double>([&](double z) { return rho(-z); }, kLawOuter, tail_power_minus_, spec_).value;
  F_.resize(x_.size());
  F_[0] = lower;
  for (std::size_t j = 0; j < piece.size(); ++j) F_[j + 1] = F_[j] + piece[j];
  for (double& v : F_) v /= mu_;
}

double StationaryLaw::cdf(double x) const {
  if (x <= x_.front()) return F_.front() * std::pow(x_.front() / x, tail_power_minus_ - 1);
  if (x >= x_.back()) return 1.0 - (1.0 - F_.back()) * std::pow(x_.back() / x, tail_power_plus_ - 1);
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
  if (x == x_[j]) return F_[j];
  auto rho = [&](double y) { return profile_.speed_density(y, alpha_); };
  return F_[j] + detail::kronrod21<double>(rho, x_[j], x).value / mu_;
}

double StationaryLaw::expectation(const std::function<double(double)>& f) const {
  auto g = [&](double y) { return f(y) * profile_.speed_density(y, alpha_); };
  double total = integrate_pieces<double>(g, x_, spec_).value;
  total += integrate_upper_tail<double>([&](double z) { return g(-z); }, kLawOuter, tail_power_minus_, spec_).value;
  total += integrate_upper_tail<double>(g, kLawOuter, tail_power_plus_, spec_).value;
  return total / mu_;
}

std::string Histogram::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "bin_center,mass,pi_mass\n";
  for (std::size_t i = 0; i < mass.size(); ++i) {
    os << 0.5 * (edges[i] + edges[i + 1]) << ',' << mass[i] << ',' << pi_mass[i] << '\n';
  }
  return os.str();
}

nlohmann::json StationaryEstimate::to_json() const {
  return {{"ks_distance", ks_distance},
          {"samples", samples},
          {"below_range", histogram.below},
          {"above_range", histogram.above}};
}

StationaryEstimate estimate_stationary(const SigmaProfile& profile, double alpha, const PathConfig& cfg,
                                       const StableSampler& sampler, const StationaryOptions& options) {
  cfg.validate();
  if (!(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0)) {
    throw DomainError("burn-in fraction must lie in [0, 1)");
  }
  if (!(options.sample_spacing > 0.0)) throw DomainError("sample spacing must be positive");
  if (options.bins < 1 || !(options.range > 0.0)) throw DomainError("histogram needs at least one bin and a positive range");
  const StationaryLaw law(profile, alpha);

  const double burn = options.burn_in_fraction * cfg.horizon;
  std::vector<double> sample_times;
  for (double s = burn; s < cfg.horizon; s += options.sample_spacing) sample_times.push_back(s);
  if (sample_times.empty()) throw DomainError("no sample time falls between the burn-in and the horizon");

  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<std::vector<double>> per_path(n);
  const Stepper stepper(profile, alpha, cfg);
  parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
    StableSampler s = sampler.for_path(static_cast<std::uint64_t>(i));
    auto& out = per_path[static_cast<std::size_t>(i)];
    out.reserve(sample_times.size());
    std::size_t next = 0;
    const bool ok = walk(stepper, options.y0, cfg, s, bulk_scale, [&](double, double y, double t_end) {
      while (next < sample_times.size() && sample_times[next] < t_end) {
        out.push_back(y);
        ++next;
      }
      return next < sample_times.size();
    });
    if (!ok) throw HorizonExceeded("a stationary path left every finite range");
  });

  std::vector<double> pooled;
  pooled.reserve(n * sample_times.size());
  for (const auto& v : per_path) pooled.insert(pooled.end(), v.begin(), v.end());
  std::sort(pooled.begin(), pooled.end());

  StationaryEstimate out;
  out.samples = static_cast<Index>(pooled.size());
  const double m = double(pooled.size());
  double d = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double F = law.cdf(pooled[i]);
    d = std::max({d, double(i + 1) / m - F, F - double(i) / m});
  }
  out.ks_distance = d;

  Histogram& h = out.histogram;
  const Index bins = options.bins;
  for (Index b = 0; b <= bins; ++b) h.edges.push_back(-options.range + 2 * options.range * double(b) / double(bins));
  h.mass.assign(static_cast<std::size_t>(bins), 0.0);
  for (double y : pooled) {
    if (y < -options.range) {
      h.below += 1;
    } else if (y >= options.range) {
      h.above += 1;
    } else {
      const auto b = std::min<Index>(bins - 1, static_cast<Index>((y + options.range) / (2 * options.range) * double(bins)));
      h.mass[static_cast<std::size_t>(b)] += 1;
    }
  }
  for (double& v : h.mass) v /= m;
  h.below /= m;
  h.above /= m;
  for (Index b = 0; b < bins; ++b) {
    h.pi_mass.push_back(law.cdf(h.edges[static_cast<std::size_t>(b + 1)]) - law.cdf(h.edges[static_cast<std::size_t>(b)]));
  }
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json DecayEstimate::to_json() const {
  return {{"rate", rate}, {"stderr", std_error}, {"pi_f", pi_f}, {"points_in_window", points}};
}

DecayEstimate estimate_decay_rate(const SigmaProfile& profile, double alpha, const std::function<double(double)>& f,
                                  const std::vector<double>& x0_list, const PathConfig& cfg,
                                  const StableSampler& sampler, const DecayOptions& options) {
  cfg.validate();
  if (x0_list.empty()) throw DomainError("decay fit needs at least one starting point");
  if (options.time_points < 3) throw DomainError("decay fit needs at least three time points");
  const StationaryLaw law(profile, alpha);

  DecayEstimate out;
  out.pi_f = law.expectation(f);
  const std::size_t J = static_cast<std::size_t>(options.time_points);
  for (std::size_t j = 1; j <= J; ++j) out.times.push_back(cfg.horizon * double(j) / double(J));

  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  const Stepper stepper(profile, alpha, cfg);
  for (std::size_t g = 0; g < x0_list.size(); ++g) {
    // paths of different starting points use disjoint substreams
    std::vector<std::vector<double>> values(n);
    parallel_for<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
      StableSampler s = sampler.for_path(static_cast<std::uint64_t>(g * n) + static_cast<std::uint64_t>(i));
      auto& v = values[static_cast<std::size_t>(i)];
      v.reserve(J);
      const bool ok = walk(stepper, x0_list[g], cfg, s, bulk_scale, [&](double, double y, double t_end) {
        while (v.size() < J && out.times[v.size()] < t_end) v.push_back(f(y));
        return v.size() < J;
      });
      if (!ok) throw HorizonExceeded("a decay path left every finite range");
    });
    std::vector<double> sig(J), noise(J);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < J; ++j) {
      for (std::size_t i = 0; i < n; ++i) column[i] = values[i][j];
      const double m = mean_of(column);
      sig[j] = m - out.pi_f;
      noise[j] = std_error_of(column, m);
    }
    out.signal.push_back(std::move(sig));
    out.noise.push_back(std::move(noise));
  }

  // common slope with one intercept per starting point
  const double floor = 1e-8 * std::max(1.0, std::abs(out.pi_f));
  double sxx = 0.0, sxy = 0.0;
  std::vector<std::vector<std::pair<double, double>>> groups;
  for (std::size_t g = 0; g < x0_list.size(); ++g) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = 0; j < J; ++j) {
      const double s = std::abs(out.signal[g][j]);
      if (!(s > std::max(options.noise_factor * out.noise[g][j], floor))) break;
      pts.emplace_back(out.times[j], std::log(s));
    }
    if (pts.size() >= 2) groups.push_back(std::move(pts));
  }
  Index N = 0;
  for (const auto& pts : groups) {
    double tb = 0.0, zb = 0.0;
    for (const auto& [t, z] : pts) {
      tb += t;
      zb += z;
    }
    tb /= double(pts.size());
    zb /= double(pts.size());
    for (const auto& [t, z] : pts) {
      sxx += (t - tb) * (t - tb);
      sxy += (t - tb) * (z - zb);
    }
    N += static_cast<Index>(pts.size());
  }
  const Index dof = N - static_cast<Index>(groups.size()) - 1;
  if (N < 3 || dof < 1 || !(sxx > 0.0)) {
    throw SignalTooNoisy("fewer than three time points carry a signal above the Monte Carlo noise");
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (const auto& pts : groups) {
    double tb = 0.0, zb = 0.0;
    for (const auto& [t, z] : pts) {
      tb += t;
      zb += z;
    }
    tb /= double(pts.size());
    zb /= double(pts.size());
    for (const auto& [t, z] : pts) {
      const double r = (z - zb) - slope * (t - tb);
      rss += r * r;
    }
  }
  out.rate = -slope;
  out.std_error = std::sqrt(rss / double(dof) / sxx);
  out.points = N;
  return out;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return d;
}

}  // namespace stable_ergo
