#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "umepi/codec.hpp"
#include "umepi/miner.hpp"
#include "umepi/model.hpp"
#include "umepi/occurrence.hpp"
#include "umepi/utility.hpp"

// Exhaustive reference miner. It shares no code with the incremental moSet
// extension of the miner: episodes come from a plain canonical enumeration
// checked by brute-force embedding, and utilities from compute_moset.

namespace umepi {

struct OracleBudget {
  std::size_t max_time_points = 32;
  std::size_t max_alphabet = 8;
  std::size_t max_episode_length = 32;
};

namespace detail {

inline bool embeds_from(const Episode& ep, const EventSequence& s, std::size_t k, std::size_t prev, Time limit) {
  if (k == ep.num_sets()) return true;
  for (std::size_t j = prev + 1; j < s.size() && s.time(j) <= limit; ++j) {
    const auto& ids = ep.sets()[k];
    const auto& evs = s.entry(j).events;
    bool all = true;
    for (EventId e : ids) {
      bool found = false;
      for (const auto& rec : evs) found = found || rec.event == e;
      all = all && found;
    }
    if (all && embeds_from(ep, s, k + 1, j, limit)) return true;
  }
  return false;
}

// True iff some occurrence of `ep` spans at most `mtd`, by backtracking over
// every embedding.
inline bool occurs_within(const Episode& ep, const EventSequence& s, Time mtd) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& evs = s.entry(i).events;
    bool all = true;
    for (EventId e : ep.sets().front()) {
      bool found = false;
      for (const auto& rec : evs) found = found || rec.event == e;
      all = all && found;
    }
    if (all && embeds_from(ep, s, 1, i, limit_time(s, static_cast<std::uint32_t>(i), mtd))) return true;
  }
  return false;
}

inline void check_budget(const EventSequence& s, const OracleBudget& budget) {
  if (s.size() > budget.max_time_points) {
    throw Error(ErrorKind::BudgetExceeded, std::to_string(s.size()) + " time points exceed the oracle budget of " +
                                               std::to_string(budget.max_time_points));
  }
  if (s.alphabet().size() > budget.max_alphabet) {
    throw Error(ErrorKind::BudgetExceeded, std::to_string(s.alphabet().size()) +
                                               " event types exceed the oracle budget of " +
                                               std::to_string(budget.max_alphabet));
  }
}

}  // namespace detail

/// Every canonical episode with an occurrence of span <= mtd, optionally
/// capped at `length_cap` events.
inline std::vector<Episode> enumerate_episodes(const EventSequence& s, Time mtd, const OracleBudget& budget = {},
                                               std::optional<std::size_t> length_cap = std::nullopt) {
  detail::check_budget(s, budget);
  const auto n = static_cast<std::uint32_t>(s.alphabet().size());
  std::set<Episode> seen;
  std::vector<Episode> stack;
  for (std::uint32_t i = 0; i < n; ++i) {
    auto ep = Episode::singleton(EventId{i});
    if (detail::occurs_within(ep, s, mtd)) stack.push_back(std::move(ep));
  }
  while (!stack.empty()) {
    Episode ep = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(ep).second) continue;
    if (length_cap && ep.length() >= *length_cap) continue;

    std::vector<Episode> children;
    const EventId top = ep.last_set().back();
    for (std::uint32_t i = top.value + 1; i < n; ++i) children.push_back(simult_concat(ep, EventId{i}));
    for (std::uint32_t i = 0; i < n; ++i) children.push_back(serial_concat(ep, EventId{i}));
    for (auto& child : children) {
      if (!detail::occurs_within(child, s, mtd)) continue;
      if (child.length() > budget.max_episode_length) {
        throw Error(ErrorKind::BudgetExceeded, "episode length exceeds the oracle budget of " +
                                                   std::to_string(budget.max_episode_length));
      }
      stack.push_back(std::move(child));
    }
  }
  return {seen.begin(), seen.end()};
}

/// Exact HUE set by exhaustive enumeration. Ignores the variant, order and
/// mode fields of `config`.
inline std::vector<HueRecord> oracle_mine(const EventSequence& s, const MiningConfig& config,
                                          const OracleBudget& budget = {}) {
  config.validate();
  std::vector<HueRecord> out;
  for (const auto& ep : enumerate_episodes(s, config.mtd, budget, config.max_episode_length)) {
    auto mo = compute_moset(ep, s, config.mtd);
    if (mo.empty()) continue;
    const Utility u = episode_utility(ep, mo, s);
    if (config.min_util.admits(u, s.total_utility())) out.push_back({ep, u, std::move(mo)});
  }
  sort_hues(out, s.alphabet());
  return out;
}

}  // namespace umepi
