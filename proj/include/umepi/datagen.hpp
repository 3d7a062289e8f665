#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "umepi/codec.hpp"
#include "umepi/model.hpp"

namespace umepi {

/// SplitMix64 (Steele, Lea & Flood), used to expand a 64-bit seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna). Bit-identical across platforms.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [lo, hi], unbiased by rejection.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t reject_below = (0 - span) % span;
    std::uint64_t x = next();
    while (x < reject_below) x = next();
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Box-Muller; one standard normal per call, two uniforms consumed.
  double normal() {
    const double u1 = 1.0 - unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

struct GenConfig {
  std::size_t num_time_points = 1000;
  std::size_t alphabet_size = 20;
  std::size_t events_per_point_min = 1;
  std::size_t events_per_point_max = 5;
  Quantity quantity_min = 1;
  Quantity quantity_max = 6;
  Utility unit_utility_min = 1;
  Utility unit_utility_max = 1000;
  double lognormal_location = 3.912023005428146;  // ln(50)
  double lognormal_scale = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    auto bad = [](const std::string& why) { return Error(ErrorKind::InvalidConfig, why); };
    if (num_time_points == 0) throw bad("number of time points must be positive");
    if (alphabet_size == 0) throw bad("alphabet size must be positive");
    if (events_per_point_min == 0 || events_per_point_min > events_per_point_max) {
      throw bad("events per time point must satisfy 1 <= min <= max");
    }
    if (events_per_point_max > alphabet_size) throw bad("events per time point exceed the alphabet size");
    if (quantity_min < 1 || quantity_min > quantity_max) throw bad("quantity range must satisfy 1 <= min <= max");
    if (unit_utility_min < 1 || unit_utility_min > unit_utility_max) {
      throw bad("unit utility range must satisfy 1 <= min <= max");
    }
    if (!(lognormal_scale >= 0.0) || !std::isfinite(lognormal_location)) throw bad("invalid log-normal parameters");
  }
};

inline std::vector<std::string> generated_event_names(std::size_t count) {
  const std::size_t width = std::to_string(count).size();
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    std::string digits = std::to_string(i);
    names.push_back("e" + std::string(width - digits.size(), '0') + digits);
  }
  return names;
}

/// Random sequence: one log-normal unit utility per event type (rounded,
/// clamped), then per time point a uniform distinct event subset with uniform
/// quantities. Times are 1..num_time_points.
inline NativeDocument generate(const GenConfig& config) {
  config.validate();
  Xoshiro256 rng(config.seed);
  auto alphabet = std::make_shared<const Alphabet>(generated_event_names(config.alphabet_size));

  std::vector<Utility> units(config.alphabet_size);
  for (auto& u : units) {
    const double draw = std::exp(config.lognormal_location + config.lognormal_scale * rng.normal());
    const double rounded = std::isfinite(draw) ? std::round(draw) : static_cast<double>(config.unit_utility_max);
    u = static_cast<Utility>(std::clamp(rounded, static_cast<double>(config.unit_utility_min),
                                        static_cast<double>(config.unit_utility_max)));
  }
  UtilityTable table(units);

  std::vector<TimePointEntry> entries;
  entries.reserve(config.num_time_points);
  std::vector<std::uint32_t> pool(config.alphabet_size);
  for (std::size_t t = 1; t <= config.num_time_points; ++t) {
    std::iota(pool.begin(), pool.end(), 0u);
    const auto count = static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(config.events_per_point_min),
                                                            static_cast<std::int64_t>(config.events_per_point_max)));
    TimePointEntry entry{static_cast<Time>(t), {}};
    for (std::size_t k = 0; k < count; ++k) {
      const auto pick = static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(k),
                                                             static_cast<std::int64_t>(pool.size() - 1)));
      std::swap(pool[k], pool[pick]);
      const EventId e{pool[k]};
      const Quantity q = rng.uniform(config.quantity_min, config.quantity_max);
      entry.events.push_back({e, q, table.unit(e) * q});
    }
    entries.push_back(std::move(entry));
  }
  return NativeDocument{EventSequence(std::move(alphabet), std::move(entries)), std::move(table)};
}

}  // namespace umepi
