#pragma once

#include <span>
#include <string_view>

#include "umepi/model.hpp"
#include "umepi/occurrence.hpp"

namespace umepi {

/// Upper-bound flavours of the episode-weighted utilization.
///   baseline: sum of all matched sets + tu over [T_e, T_s+MTD]
///   opt1:     matched sets 1..k-1 + tu over [T_e, T_s+MTD]
///   opt2:     all matched sets + ru(E_k, T_e) + tu over (T_e, T_s+MTD]
enum class EwuVariant { baseline, opt1, opt2 };

inline std::string_view to_string(EwuVariant v) {
  switch (v) {
    case EwuVariant::baseline: return "baseline";
    case EwuVariant::opt1: return "opt1";
    case EwuVariant::opt2: return "opt2";
  }
  return "?";
}

namespace detail {

inline std::size_t require_index(const EventSequence& s, Time t) {
  auto index = s.index_of(t);
  if (!index) throw Error(ErrorKind::UnknownTime, "time " + std::to_string(t) + " is not a time point");
  return *index;
}

// `prefix`/`last` are the matched utilities of sets 1..k-1 and E_k,
// `tu_end`/`ru_end` the total and remaining utility at T_e, and `after` the
// tu sum over existing time points in (T_e, T_s+MTD].
inline Utility ewu_formula(EwuVariant v, Utility prefix, Utility last, Utility tu_end, Utility ru_end,
                           Utility after) {
  switch (v) {
    case EwuVariant::baseline: return prefix + last + tu_end + after;
    case EwuVariant::opt1: return prefix + tu_end + after;
    case EwuVariant::opt2: return prefix + last + ru_end + after;
  }
  return 0;
}

}  // namespace detail

inline Utility set_utility(std::span<const EventId> set, Time t, const EventSequence& s) {
  const auto& entry = s.entry(detail::require_index(s, t));
  Utility sum = 0;
  for (EventId e : set) {
    const auto* rec = entry.find(e);
    if (!rec) {
      throw Error(ErrorKind::AbsentEvent,
                  "event '" + s.alphabet().name(e) + "' does not occur at time " + std::to_string(t));
    }
    sum += rec->utility;
  }
  return sum;
}

inline Utility time_point_utility(Time t, const EventSequence& s) { return s.tu_at(detail::require_index(s, t)); }

inline Utility total_utility(const EventSequence& s) { return s.total_utility(); }

/// Utilities at `t` of the events ordered after the order-maximal member of `set`.
inline Utility remaining_utility(std::span<const EventId> set, Time t, const ProcessingOrder& order,
                                 const EventSequence& s) {
  const auto& entry = s.entry(detail::require_index(s, t));
  for (EventId e : set) {
    if (!entry.contains(e)) {
      throw Error(ErrorKind::AbsentEvent,
                  "event '" + s.alphabet().name(e) + "' does not occur at time " + std::to_string(t));
    }
  }
  const auto top = order.rank(order.max_of(set));
  Utility sum = 0;
  for (const auto& rec : entry.events) {
    if (order.rank(rec.event) > top) sum += rec.utility;
  }
  return sum;
}

namespace detail {

struct MatchedUtility {
  Utility prefix = 0;
  Utility last = 0;
  std::size_t end_index = 0;
};

// Greedy-earliest match anchored at the interval start; the match must end
// exactly at the interval end.
inline MatchedUtility match_interval(const Episode& alpha, const Interval& mo, const EventSequence& s) {
  const std::size_t start = require_index(s, mo.start);
  auto positions = greedy_positions(alpha, s, start);
  if (positions.empty() || s.time(positions.back()) != mo.end) {
    throw Error(ErrorKind::PreconditionViolation, "interval [" + std::to_string(mo.start) + "," +
                                                      std::to_string(mo.end) +
                                                      "] is not a minimal occurrence of the episode");
  }
  MatchedUtility out;
  const auto& sets = alpha.sets();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const Utility u = utility_at(s, sets[k], positions[k]);
    if (k + 1 == sets.size()) {
      out.last = u;
    } else {
      out.prefix += u;
    }
  }
  out.end_index = positions.back();
  return out;
}

}  // namespace detail

inline Utility episode_utility(const Episode& alpha, const MoSet& mo_set, const EventSequence& s) {
  Utility total = 0;
  for (const auto& mo : mo_set) {
    auto m = detail::match_interval(alpha, mo, s);
    total += m.prefix + m.last;
  }
  return total;
}

inline Utility ewu(EwuVariant variant, const Episode& alpha, const Interval& mo, const EventSequence& s, Time mtd,
                   const ProcessingOrder& order) {
  auto m = detail::match_interval(alpha, mo, s);
  const Utility tu_end = s.tu_at(m.end_index);
  const Utility ru_end = remaining_utility(alpha.last_set(), mo.end, order, s);
  const auto start = static_cast<std::uint32_t>(detail::require_index(s, mo.start));
  const Utility after = s.tu_range(m.end_index + 1, s.upper_index(detail::limit_time(s, start, mtd)));
  return detail::ewu_formula(variant, m.prefix, m.last, tu_end, ru_end, after);
}

inline Utility ewu_total(EwuVariant variant, const Episode& alpha, const MoSet& mo_set, const EventSequence& s,
                         Time mtd, const ProcessingOrder& order) {
  Utility total = 0;
  for (const auto& mo : mo_set) total += ewu(variant, alpha, mo, s, mtd, order);
  return total;
}

}  // namespace umepi
