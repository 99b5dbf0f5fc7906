#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "stable_ergo/quadrature.hpp"
#include "stable_ergo/random.hpp"
#include "stable_ergo/sigma_profile.hpp"
#include "stable_ergo/types.hpp"

namespace stable_ergo {

enum class Scheme { euler, timechange };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Step control. With scheme euler, dt is the intrinsic time step where sigma
/// is moderate; it shrinks to dt ((1+|y|)/sigma(y))^alpha where sigma outgrows
/// |y|, so every step moves Y by about dt^{1/alpha}(1+|y|) at most. With
/// scheme timechange, the driving path X advances by s = dt (1+|X|)^alpha and
/// the clock by s sigma(X)^{-alpha}.
struct PathConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  Scheme scheme = Scheme::euler;
  Index n_paths = 1;
  std::int64_t max_steps = 200'000'000;  // per path

  void validate() const;
  nlohmann::json to_json() const;
};

/// Piecewise-constant right-continuous path: y[k] holds on [t[k], t[k+1]).
struct Path {
  std::vector<double> t;
  std::vector<double> y;
  bool diverged = false;

  double at(double time) const;
  std::string to_csv() const;
};

inline constexpr double kDivergenceLevel = 1e300;

/// Y_{k+1} = Y_k + sigma(Y_k) dX_k, recorded at every step up to the horizon.
Path simulate_euler(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg,
                    StableSampler& sampler);

/// X on its own clock, A accumulated by the left-endpoint rule and Y_t = X at
/// the inverse of A. Throws HorizonExceeded when A has not reached the horizon
/// within cfg.max_steps driving steps.
Path simulate_timechange(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg,
                         StableSampler& sampler);

Path simulate(const SigmaProfile& profile, double alpha, double y0, const PathConfig& cfg, StableSampler& sampler);

struct HittingEstimate {
  double mean = 0.0;  // censored paths count with the horizon, so this is a lower estimate when n_censored > 0
  double std_error = 0.0;
  Index n_hit = 0;
  Index n_censored = 0;
  double epsilon = 0.0;
  double x0 = 0.0;

  nlohmann::json to_json() const;
};

/// Mean first entrance time of [-epsilon, epsilon] from x0 over cfg.n_paths
/// paths, censored at cfg.horizon. Steps shrink near the target so a single
/// step cannot cross it unseen. Throws AllCensored when no path enters.
HittingEstimate estimate_hitting_time(const SigmaProfile& profile, double alpha, double x0, double epsilon,
                                      const PathConfig& cfg, const StableSampler& sampler);

/// Normalized speed measure pi = sigma^{-alpha} dx / mu(R), tabulated once on a
/// two-sided geometric grid. Throws NotErgodic when mu(R) is infinite.
class StationaryLaw {
 public:
  StationaryLaw(const SigmaProfile& profile, double alpha, const QuadratureSpec& spec = {});

  double mu_total() const { return mu_; }
  double cdf(double x) const;
  /// pi(f) for bounded f.
  double expectation(const std::function<double(double)>& f) const;

 private:
  SigmaProfile profile_;
  double alpha_;
  double mu_;
  double tail_power_minus_, tail_power_plus_;
  std::vector<double> x_, F_;
  QuadratureSpec spec_;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<double> mass;     // empirical fraction per bin
  std::vector<double> pi_mass;  // pi of each bin
  double below = 0.0, above = 0.0;

  std::string to_csv() const;
};

struct StationaryOptions {
  double y0 = 0.0;
  double burn_in_fraction = 0.2;
  double sample_spacing = 0.5;
  Index bins = 40;
  double range = 10.0;  // histogram on [-range, range]
};

struct StationaryEstimate {
  double ks_distance = 0.0;
  Index samples = 0;
  Histogram histogram;

  nlohmann::json to_json() const;
};

/// Occupation at equally spaced times after the burn-in, pooled over paths,
/// against the quadrature-normalized pi.
StationaryEstimate estimate_stationary(const SigmaProfile& profile, double alpha, const PathConfig& cfg,
                                       const StableSampler& sampler, const StationaryOptions& options = {});

struct DecayOptions {
  Index time_points = 40;  // equally spaced on (0, horizon]
  double noise_factor = 3.0;
};

struct DecayEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  double pi_f = 0.0;
  Index points = 0;  // (x0, t) pairs inside the fit window
  std::vector<double> times;
  std::vector<std::vector<double>> signal;  // per x0: E_x0 f(Y_t) - pi(f)
  std::vector<std::vector<double>> noise;   // per x0: standard error of the mean

  nlohmann::json to_json() const;
};

/// Common slope of log|E_x0 f(Y_t) - pi(f)| against t, one intercept per x0,
/// over the leading times where the signal exceeds noise_factor standard
/// errors. Throws SignalTooNoisy with fewer than three usable points.
DecayEstimate estimate_decay_rate(const SigmaProfile& profile, double alpha, const std::function<double(double)>& f,
                                  const std::vector<double>& x0_list, const PathConfig& cfg,
                                  const StableSampler& sampler, const DecayOptions& options = {});

/// Two-sample Kolmogorov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace stable_ergo
