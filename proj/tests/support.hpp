#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "umepi/umepi.hpp"

namespace umepi::test {

inline constexpr const char* kRunningExample =
    "U A 1\nU B 5\nU C 2\nU D 3\nU E 7\n"
    "T 1 A:4 C:3 D:1\n"
    "T 2 B:2 C:2\n"
    "T 3 A:3 D:2 E:1\n"
    "T 4 D:1 E:2\n"
    "T 5 B:2\n"
    "T 6 A:2 B:2 D:4\n";

inline constexpr const char* kGapExample =
    "U A 1\nU B 1\nU C 1\n"
    "T 1 A:1\n"
    "T 2 A:1\n"
    "T 3 B:1\n"
    "T 4 B:1 C:1\n";

inline NativeDocument running_example() { return parse_native(kRunningExample); }
inline NativeDocument gap_example() { return parse_native(kGapExample); }

inline Episode ep(const EventSequence& s, std::string_view text) { return parse_episode(text, s.alphabet()); }

inline std::string show(const Episode& e, const EventSequence& s) { return format_episode(e, s.alphabet()); }

// Every time-point window [ts, te] that holds an occurrence, minimality by
// brute-force interval containment, then the span filter. Quadratic in the
// number of time points times the embedding search; for small inputs only.
inline MoSet naive_moset(const Episode& e, const EventSequence& s, Time mtd) {
  auto holds = [&](std::size_t i, const std::vector<EventId>& set) {
    for (EventId x : set) {
      if (!s.entry(i).contains(x)) return false;
    }
    return true;
  };
  const auto& sets = e.sets();
  // Does sets[k..] embed into positions (prev, last] with sets.back() at `last`?
  auto fits = [&](auto&& self, std::size_t k, std::size_t prev, std::size_t last) -> bool {
    if (k + 1 == sets.size()) return last > prev && holds(last, sets[k]);
    for (std::size_t j = prev + 1; j < last; ++j) {
      if (holds(j, sets[k]) && self(self, k + 1, j, last)) return true;
    }
    return false;
  };
  std::vector<std::pair<std::size_t, std::size_t>> occ;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!holds(a, sets.front())) continue;
    for (std::size_t b = a; b < s.size(); ++b) {
      const bool ok = sets.size() == 1 ? (a == b) : (b > a && fits(fits, 1, a, b));
      if (ok) occ.emplace_back(a, b);
    }
  }
  MoSet out;
  for (auto [a, b] : occ) {
    bool minimal = true;
    for (auto [c, d] : occ) {
      if (a <= c && d <= b && (a != c || b != d)) minimal = false;
    }
    if (minimal && s.time(b) - s.time(a) <= mtd) out.push_back({s.time(a), s.time(b)});
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.start < y.start; });
  return out;
}

struct RandomShape {
  std::size_t max_time_points = 12;
  std::size_t max_alphabet = 5;
  std::size_t max_events_per_point = 3;
  Quantity max_quantity = 6;
  Utility max_unit = 10;
  Time max_gap = 1;
};

// Small random sequence: times may skip values when max_gap > 1.
inline NativeDocument random_sequence(std::uint64_t seed, const RandomShape& shape = {}) {
  Xoshiro256 rng(seed);
  const auto n_events = static_cast<std::size_t>(rng.uniform(2, static_cast<std::int64_t>(shape.max_alphabet)));
  const auto n_points = static_cast<std::size_t>(rng.uniform(3, static_cast<std::int64_t>(shape.max_time_points)));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_events; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
  auto alphabet = std::make_shared<const Alphabet>(names);
  std::vector<Utility> units(n_events);
  for (auto& u : units) u = rng.uniform(1, shape.max_unit);
  UtilityTable table(units);

  std::vector<TimePointEntry> entries;
  Time t = 0;
  const auto per_point_cap = static_cast<std::int64_t>(std::min(shape.max_events_per_point, n_events));
  for (std::size_t i = 0; i < n_points; ++i) {
    t += rng.uniform(1, shape.max_gap);
    std::vector<std::uint32_t> pool(n_events);
    for (std::uint32_t k = 0; k < n_events; ++k) pool[k] = k;
    const auto count = static_cast<std::size_t>(rng.uniform(1, per_point_cap));
    TimePointEntry entry{t, {}};
    for (std::size_t k = 0; k < count; ++k) {
      const auto pick = static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(k),
                                                             static_cast<std::int64_t>(n_events - 1)));
      std::swap(pool[k], pool[pick]);
      const EventId e{pool[k]};
      const Quantity q = rng.uniform(1, shape.max_quantity);
      entry.events.push_back({e, q, table.unit(e) * q});
    }
    std::sort(entry.events.begin(), entry.events.end(),
              [](const EventRecord& a, const EventRecord& b) { return a.event < b.event; });
    entries.push_back(std::move(entry));
  }
  return NativeDocument{EventSequence(std::move(alphabet), std::move(entries)), std::move(table)};
}

inline MiningConfig config_of(Time mtd, MinUtil min_util, EwuVariant variant = EwuVariant::opt2,
                              OrderKind order = OrderKind::ewu_ascending, ExtensionMode mode = ExtensionMode::strict) {
  MiningConfig c;
  c.mtd = mtd;
  c.min_util = min_util;
  c.ewu = variant;
  c.order = order;
  c.mode = mode;
  return c;
}

inline std::map<Episode, Utility> as_map(const std::vector<HueRecord>& hues) {
  std::map<Episode, Utility> out;
  for (const auto& h : hues) out.emplace(h.episode, h.utility);
  return out;
}

inline constexpr EwuVariant kVariants[] = {EwuVariant::baseline, EwuVariant::opt1, EwuVariant::opt2};
inline constexpr OrderKind kOrders[] = {OrderKind::occurrence, OrderKind::lexicographic, OrderKind::ewu_ascending,
                                        OrderKind::ewu_descending};
inline constexpr ExtensionMode kModes[] = {ExtensionMode::paper, ExtensionMode::strict};

}  // namespace umepi::test
