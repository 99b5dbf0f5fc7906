#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "stable_ergo/special_functions.hpp"

namespace stable_ergo {

/// Symmetric alpha-stable variates with characteristic function exp(-|xi|^alpha)
/// by the Chambers-Mallows-Stuck transform. Each (master_seed, stream_id,
/// substream) triple owns an independent mt19937_64 seeded through seed_seq, so
/// a path's randomness does not depend on which thread draws it.
class StableSampler {
 public:
  StableSampler(double alpha, std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t substream = 0)
      : alpha_(alpha), master_seed_(master_seed), stream_id_(stream_id), substream_(substream) {
    require_alpha(alpha);
    std::seed_seq seq{lo(master_seed), hi(master_seed), lo(stream_id), hi(stream_id), lo(substream), hi(substream)};
    engine_.seed(seq);
  }

  /// The sampler for path i of this stream.
  StableSampler for_path(std::uint64_t i) const { return StableSampler(alpha_, master_seed_, stream_id_, i + 1); }

  double alpha() const { return alpha_; }
  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// S = sin(aU) / cos(U)^{1/a} * (cos((1-a)U) / E)^{(1-a)/a}
  double standard() {
    constexpr double half_pi = std::numbers::pi / 2;
    double u;
    do {
      u = uniform_(engine_);
    } while (u == 0.0);
    const double U = half_pi * (2 * u - 1);
    const double E = exponential_(engine_);
    const double a = alpha_;
    return std::sin(a * U) / std::pow(std::cos(U), 1 / a) * std::pow(std::cos((1 - a) * U) / E, (1 - a) / a);
  }

  /// An increment of the driving process over a step dt: dt^{1/alpha} S.
  double increment(double dt) { return std::pow(dt, 1 / alpha_) * standard(); }

  double uniform() { return uniform_(engine_); }

 private:
  static std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
  static std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

  double alpha_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t substream_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
};

}  // namespace stable_ergo
