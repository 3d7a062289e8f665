#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "umepi/model.hpp"

namespace umepi {

struct Interval {
  Time start = 0;
  Time end = 0;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Minimal occurrences of one episode, sorted by start. Starts and ends are
/// both strictly increasing.
using MoSet = std::vector<Interval>;

enum class ExtensionMode { paper, strict };

inline std::string_view to_string(ExtensionMode mode) {
  return mode == ExtensionMode::paper ? "paper" : "strict";
}

inline bool is_valid_moset(const MoSet& mo, Time mtd) {
  for (std::size_t i = 0; i < mo.size(); ++i) {
    if (mo[i].start > mo[i].end || mo[i].end - mo[i].start > mtd) return false;
    if (i > 0 && (mo[i].start <= mo[i - 1].start || mo[i].end <= mo[i - 1].end)) return false;
  }
  return true;
}

namespace detail {

// Entry-index form of a minimal occurrence, carrying the matched utilities of
// the greedy-earliest embedding: `prefix` over sets 1..k-1, `last` over E_k.
struct Occurrence {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  Utility prefix = 0;
  Utility last = 0;
};

// First entry index in [from, limit) whose event set contains `set`, or
// `limit` when there is none.
inline std::size_t next_containing(const EventSequence& s, std::span<const EventId> set, std::size_t from,
                                   std::size_t limit) {
  // Walk the occurrence list of the set's rarest member.
  EventId pivot = set.front();
  for (EventId e : set) {
    if (s.positions(e).size() < s.positions(pivot).size()) pivot = e;
  }
  auto pos = s.positions(pivot);
  auto it = std::lower_bound(pos.begin(), pos.end(), static_cast<std::uint32_t>(from));
  for (; it != pos.end() && *it < limit; ++it) {
    if (set.size() == 1 || s.entry(*it).contains_all(set)) return *it;
  }
  return limit;
}

inline Utility utility_at(const EventSequence& s, std::span<const EventId> set, std::size_t index) {
  const auto& entry = s.entry(index);
  Utility sum = 0;
  for (EventId e : set) sum += entry.find(e)->utility;
  return sum;
}

// Greedy-earliest positions of every set of `episode`, the first one anchored
// at entry `start`. Empty when no embedding exists.
inline std::vector<std::size_t> greedy_positions(const Episode& episode, const EventSequence& s,
                                                 std::size_t start) {
  const auto& sets = episode.sets();
  if (!s.entry(start).contains_all(sets.front())) return {};
  std::vector<std::size_t> out{start};
  out.reserve(sets.size());
  for (std::size_t k = 1; k < sets.size(); ++k) {
    std::size_t next = next_containing(s, sets[k], out.back() + 1, s.size());
    if (next == s.size()) return {};
    out.push_back(next);
  }
  return out;
}

// Latest end time admitted for an occurrence starting at entry `start`.
inline Time limit_time(const EventSequence& s, std::uint32_t start, Time mtd) {
  const Time t = s.time(start);
  return mtd > std::numeric_limits<Time>::max() - t ? std::numeric_limits<Time>::max() : t + mtd;
}

// Keeps the candidates that contain no later-starting candidate. Requires
// strictly increasing starts.
inline void keep_minimal(std::vector<Occurrence>& cands) {
  std::uint32_t min_end = std::numeric_limits<std::uint32_t>::max();
  std::size_t kept = cands.size();
  for (std::size_t i = cands.size(); i-- > 0;) {
    if (cands[i].end < min_end) {
      min_end = cands[i].end;
      cands[--kept] = cands[i];
    }
  }
  cands.erase(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(kept));
}

inline std::vector<Occurrence> single_event_occurrences(const EventSequence& s, EventId e) {
  std::vector<Occurrence> out;
  for (std::uint32_t p : s.positions(e)) out.push_back({p, p, 0, s.entry(p).find(e)->utility});
  return out;
}

inline std::vector<Occurrence> extend_serial(const EventSequence& s, const std::vector<Occurrence>& occs, EventId e,
                                             Time mtd) {
  std::vector<Occurrence> out;
  auto pos = s.positions(e);
  for (const auto& occ : occs) {
    auto it = std::upper_bound(pos.begin(), pos.end(), occ.end);
    if (it == pos.end() || s.time(*it) > limit_time(s, occ.start, mtd)) continue;
    out.push_back({occ.start, *it, occ.prefix + occ.last, s.entry(*it).find(e)->utility});
  }
  keep_minimal(out);
  return out;
}

// `last_set` is the prefix's last set; `e` must not belong to it.
inline std::vector<Occurrence> extend_simult(const EventSequence& s, const std::vector<Occurrence>& occs,
                                             std::span<const EventId> last_set, EventId e, Time mtd,
                                             ExtensionMode mode) {
  std::vector<Occurrence> out;
  auto pos = s.positions(e);
  for (const auto& occ : occs) {
    if (mode == ExtensionMode::paper) {
      if (const auto* rec = s.entry(occ.end).find(e)) {
        out.push_back({occ.start, occ.end, occ.prefix, occ.last + rec->utility});
      }
      continue;
    }
    const Time limit = limit_time(s, occ.start, mtd);
    for (auto it = std::lower_bound(pos.begin(), pos.end(), occ.end); it != pos.end() && s.time(*it) <= limit;
         ++it) {
      const auto& entry = s.entry(*it);
      if (*it == occ.end) {
        out.push_back({occ.start, occ.end, occ.prefix, occ.last + entry.find(e)->utility});
        break;
      }
      if (entry.contains_all(last_set)) {
        out.push_back({occ.start, *it, occ.prefix, utility_at(s, last_set, *it) + entry.find(e)->utility});
        break;
      }
    }
  }
  keep_minimal(out);
  return out;
}

inline MoSet to_moset(const EventSequence& s, const std::vector<Occurrence>& occs) {
  MoSet mo;
  mo.reserve(occs.size());
  for (const auto& occ : occs) mo.push_back({s.time(occ.start), s.time(occ.end)});
  return mo;
}

inline std::vector<Occurrence> from_moset(const EventSequence& s, const MoSet& mo) {
  std::vector<Occurrence> occs;
  occs.reserve(mo.size());
  for (const auto& iv : mo) {
    auto a = s.index_of(iv.start);
    auto b = s.index_of(iv.end);
    if (!a || !b) throw Error(ErrorKind::UnknownTime, "interval endpoint is not a time point of the sequence");
    occs.push_back({static_cast<std::uint32_t>(*a), static_cast<std::uint32_t>(*b), 0, 0});
  }
  return occs;
}

}  // namespace detail

/// End time of the greedy-earliest match anchored at `start`, or nullopt when
/// `start` is not a time point holding the first set or no match exists.
inline std::optional<Time> earliest_end(const Episode& episode, const EventSequence& s, Time start) {
  auto index = s.index_of(start);
  if (!index) return std::nullopt;
  auto positions = detail::greedy_positions(episode, s, *index);
  if (positions.empty()) return std::nullopt;
  return s.time(positions.back());
}

/// All minimal occurrences of `episode`, then restricted to span <= mtd.
inline MoSet compute_moset(const Episode& episode, const EventSequence& s, Time mtd) {
  std::vector<detail::Occurrence> cands;
  const auto& first = episode.sets().front();
  const std::size_t none = s.size();
  for (std::size_t p = detail::next_containing(s, first, 0, none); p != none;
       p = detail::next_containing(s, first, p + 1, none)) {
    auto positions = detail::greedy_positions(episode, s, p);
    if (positions.empty()) break;  // later starts cannot match either
    cands.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(positions.back()), 0, 0});
  }
  detail::keep_minimal(cands);
  MoSet mo;
  for (const auto& c : cands) {
    if (s.time(c.end) - s.time(c.start) <= mtd) mo.push_back({s.time(c.start), s.time(c.end)});
  }
  return mo;
}

/// moSet of serial_concat(alpha, e) from moSet(alpha).
inline MoSet extend_moset_serial(const MoSet& mo_alpha, const Episode& alpha, EventId e, const EventSequence& s,
                                 Time mtd) {
  (void)alpha;
  return detail::to_moset(s, detail::extend_serial(s, detail::from_moset(s, mo_alpha), e, mtd));
}

/// moSet of simult_concat(alpha, e) from moSet(alpha). Paper mode keeps the
/// prefix occurrences whose end holds `e`; strict mode also searches later
/// time points of each window and is exact.
inline MoSet extend_moset_simult(const MoSet& mo_alpha, const Episode& alpha, EventId e, const EventSequence& s,
                                 Time mtd, ExtensionMode mode) {
  const auto& last = alpha.last_set();
  if (std::binary_search(last.begin(), last.end(), e)) {
    throw Error(ErrorKind::PreconditionViolation, "event already belongs to the last simultaneous set");
  }
  return detail::to_moset(s, detail::extend_simult(s, detail::from_moset(s, mo_alpha), last, e, mtd, mode));
}

}  // namespace umepi
