#pragma once

#include <cstdint>
#include <random>

namespace suropt {

/// Deterministic random stream. Every sampler owns one; parallel chains get
/// independent streams derived from the user seed, so results never depend
/// on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return unit_(gen_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(gen_); }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }

  double normal() { return std_normal_(gen_); }

  double normal(double mean, double sd) { return mean + sd * std_normal_(gen_); }

  double chi_squared(double df) {
    return std::chi_squared_distribution<double>(df)(gen_);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> std_normal_{0.0, 1.0};
};

}  // namespace suropt
