#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "umepi/error.hpp"

namespace umepi {

using Time = std::int64_t;
using Utility = std::int64_t;
using Quantity = std::int64_t;

/// Dense handle of an event type inside an Alphabet. Ids follow the
/// lexicographic order of the event tokens, so comparing ids compares names.
struct EventId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EventId&, const EventId&) = default;
};

inline bool is_valid_event_token(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c == ':' || c == '{' || c == '}' || c == ',' || c == '>') return false;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
  }
  return true;
}

/// Interned, lexicographically sorted set of event tokens.
class Alphabet {
 public:
  Alphabet() = default;

  template <typename Range>
  explicit Alphabet(const Range& tokens) {
    for (const auto& token : tokens) {
      std::string name(token);
      if (!is_valid_event_token(name)) {
        throw Error(ErrorKind::SyntaxError, "invalid event token '" + name + "'");
      }
      names_.push_back(std::move(name));
    }
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  }

  Alphabet(std::initializer_list<std::string_view> tokens)
      : Alphabet(std::vector<std::string_view>(tokens)) {}

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }

  std::optional<EventId> find(std::string_view token) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), token);
    if (it == names_.end() || *it != token) return std::nullopt;
    return EventId{static_cast<std::uint32_t>(it - names_.begin())};
  }

  EventId id(std::string_view token) const {
    if (auto found = find(token)) return *found;
    throw Error(ErrorKind::UnknownEvent, "unknown event '" + std::string(token) + "'");
  }

  const std::string& name(EventId id) const { return names_.at(id.value); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

struct EventRecord {
  EventId event;
  Quantity quantity = 1;
  Utility utility = 0;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// One simultaneous event set. Events are sorted by id and distinct.
struct TimePointEntry {
  Time time = 0;
  std::vector<EventRecord> events;

  const EventRecord* find(EventId e) const {
    auto it = std::lower_bound(events.begin(), events.end(), e,
                               [](const EventRecord& r, EventId id) { return r.event < id; });
    if (it == events.end() || it->event != e) return nullptr;
    return &*it;
  }
  bool contains(EventId e) const { return find(e) != nullptr; }

  // Both ranges sorted by id.
  bool contains_all(std::span<const EventId> set) const {
    auto it = events.begin();
    for (EventId e : set) {
      while (it != events.end() && it->event < e) ++it;
      if (it == events.end() || it->event != e) return false;
      ++it;
    }
    return true;
  }

  friend bool operator==(const TimePointEntry&, const TimePointEntry&) = default;
};

/// Per-event unit utility pr(e), indexed by EventId.
class UtilityTable {
 public:
  UtilityTable() = default;
  explicit UtilityTable(std::vector<Utility> unit) : unit_(std::move(unit)) {}

  Utility unit(EventId e) const { return unit_.at(e.value); }
  std::size_t size() const noexcept { return unit_.size(); }
  const std::vector<Utility>& values() const noexcept { return unit_; }

  friend bool operator==(const UtilityTable&, const UtilityTable&) = default;

 private:
  std::vector<Utility> unit_;
};

/// A complex event sequence with cached per-time-point and total utilities.
/// Immutable after construction.
class EventSequence {
 public:
  EventSequence(std::shared_ptr<const Alphabet> alphabet, std::vector<TimePointEntry> entries)
      : alphabet_(std::move(alphabet)), entries_(std::move(entries)) {
    if (!alphabet_) throw Error(ErrorKind::InvalidConfig, "event sequence needs an alphabet");
    validate_and_index();
  }

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const noexcept { return alphabet_; }

  const std::vector<TimePointEntry>& entries() const noexcept { return entries_; }
  const TimePointEntry& entry(std::size_t index) const { return entries_[index]; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  Time time(std::size_t index) const { return entries_[index].time; }
  Utility tu_at(std::size_t index) const {
    return prefix_tu_[index + 1] - prefix_tu_[index];
  }
  Utility total_utility() const noexcept { return prefix_tu_.back(); }

  // Sum of tu over entry indices [first, last).
  Utility tu_range(std::size_t first, std::size_t last) const {
    if (first >= last) return 0;
    return prefix_tu_[last] - prefix_tu_[first];
  }

  std::optional<std::size_t> index_of(Time t) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const TimePointEntry& e, Time v) { return e.time < v; });
    if (it == entries_.end() || it->time != t) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
  }

  // First entry index whose time exceeds t.
  std::size_t upper_index(Time t) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                               [](Time v, const TimePointEntry& e) { return v < e.time; });
    return static_cast<std::size_t>(it - entries_.begin());
  }

  /// Entry indices at which `e` occurs, ascending.
  std::span<const std::uint32_t> positions(EventId e) const { return positions_.at(e.value); }

  friend bool operator==(const EventSequence& a, const EventSequence& b) {
    return *a.alphabet_ == *b.alphabet_ && a.entries_ == b.entries_;
  }

 private:
  void validate_and_index() {
    positions_.assign(alphabet_->size(), {});
    prefix_tu_.assign(entries_.size() + 1, 0);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      auto& entry = entries_[i];
      if (entry.time < 0) {
        throw Error(ErrorKind::NonPositiveValue, "negative time point " + std::to_string(entry.time));
      }
      if (i > 0 && entry.time <= entries_[i - 1].time) {
        throw Error(ErrorKind::NonIncreasingTime,
                    "time " + std::to_string(entry.time) + " does not exceed " +
                        std::to_string(entries_[i - 1].time));
      }
      if (entry.events.empty()) {
        throw Error(ErrorKind::EmptySet, "time point " + std::to_string(entry.time) + " has no events");
      }
      std::sort(entry.events.begin(), entry.events.end(),
                [](const EventRecord& a, const EventRecord& b) { return a.event < b.event; });
      Utility tu = 0;
      for (std::size_t k = 0; k < entry.events.size(); ++k) {
        const auto& rec = entry.events[k];
        if (rec.event.value >= alphabet_->size()) {
          throw Error(ErrorKind::UnknownEvent, "event id out of alphabet range");
        }
        if (k > 0 && entry.events[k - 1].event == rec.event) {
          throw Error(ErrorKind::DuplicateEvent, "event '" + alphabet_->name(rec.event) +
                                                     "' repeats at time " + std::to_string(entry.time));
        }
        if (rec.quantity <= 0 || rec.utility <= 0) {
          throw Error(ErrorKind::NonPositiveValue, "event '" + alphabet_->name(rec.event) +
                                                       "' has non-positive quantity or utility");
        }
        tu += rec.utility;
        positions_[rec.event.value].push_back(static_cast<std::uint32_t>(i));
      }
      prefix_tu_[i + 1] = prefix_tu_[i] + tu;
    }
  }

  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<TimePointEntry> entries_;
  std::vector<std::vector<std::uint32_t>> positions_;
  std::vector<Utility> prefix_tu_;
};

/// Builds an EventSequence from unit utilities and per-time-point quantities,
/// setting u(e, T) = pr(e) * q(e, T).
inline EventSequence make_sequence(std::shared_ptr<const Alphabet> alphabet, const UtilityTable& table,
                                   const std::vector<std::pair<Time, std::vector<std::pair<EventId, Quantity>>>>& points) {
  std::vector<TimePointEntry> entries;
  entries.reserve(points.size());
  for (const auto& [time, events] : points) {
    TimePointEntry entry{time, {}};
    for (auto [e, q] : events) entry.events.push_back({e, q, table.unit(e) * q});
    entries.push_back(std::move(entry));
  }
  return EventSequence(std::move(alphabet), std::move(entries));
}

/// A complex episode: ordered, non-empty list of non-empty event sets, each
/// set sorted by id. Only constructible in canonical form.
class Episode {
 public:
  using Set = std::vector<EventId>;

  static Episode singleton(EventId e) { return Episode({Set{e}}); }

  const std::vector<Set>& sets() const noexcept { return sets_; }
  std::size_t num_sets() const noexcept { return sets_.size(); }
  std::size_t length() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sets_) n += s.size();
    return n;
  }
  const Set& last_set() const { return sets_.back(); }

  friend auto operator<=>(const Episode&, const Episode&) = default;
  friend bool operator==(const Episode&, const Episode&) = default;

 private:
  explicit Episode(std::vector<Set> sets) : sets_(std::move(sets)) {}

  friend Episode canonicalize(std::vector<std::vector<EventId>> raw);
  friend Episode simult_concat(const Episode& alpha, EventId e);
  friend Episode serial_concat(const Episode& alpha, EventId e);
  friend std::optional<Episode> drop_event(const Episode& alpha, EventId e);

  std::vector<Set> sets_;
};

inline Episode canonicalize(std::vector<std::vector<EventId>> raw) {
  if (raw.empty()) throw Error(ErrorKind::EmptySet, "episode has no event sets");
  for (auto& set : raw) {
    if (set.empty()) throw Error(ErrorKind::EmptySet, "episode contains an empty event set");
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw Error(ErrorKind::DuplicateEvent, "event repeats within one simultaneous set");
    }
  }
  return Episode(std::move(raw));
}

inline Episode canonicalize(const Alphabet& alphabet, const std::vector<std::vector<std::string>>& raw) {
  std::vector<std::vector<EventId>> ids;
  ids.reserve(raw.size());
  for (const auto& set : raw) {
    auto& out = ids.emplace_back();
    for (const auto& name : set) out.push_back(alphabet.id(name));
  }
  return canonicalize(std::move(ids));
}

inline Episode canonicalize(const Episode& episode) { return canonicalize(episode.sets()); }

/// I-Concatenation: insert `e` into the last set.
inline Episode simult_concat(const Episode& alpha, EventId e) {
  auto sets = alpha.sets_;
  auto& last = sets.back();
  auto it = std::lower_bound(last.begin(), last.end(), e);
  if (it != last.end() && *it == e) {
    throw Error(ErrorKind::DuplicateEvent, "event already in the last simultaneous set");
  }
  last.insert(it, e);
  return Episode(std::move(sets));
}

/// S-Concatenation: append the singleton set {e}.
inline Episode serial_concat(const Episode& alpha, EventId e) {
  auto sets = alpha.sets_;
  sets.push_back({e});
  return Episode(std::move(sets));
}

// Removes `e` from the last set (dropping the set when it becomes empty).
// Returns nullopt when the result would be the empty episode.
inline std::optional<Episode> drop_event(const Episode& alpha, EventId e) {
  auto sets = alpha.sets_;
  auto& last = sets.back();
  auto it = std::find(last.begin(), last.end(), e);
  if (it == last.end()) {
    throw Error(ErrorKind::AbsentEvent, "event not in the last simultaneous set");
  }
  last.erase(it);
  if (last.empty()) sets.pop_back();
  if (sets.empty()) return std::nullopt;
  return Episode(std::move(sets));
}

/// True iff beta's sets embed order-preservingly into alpha's sets with
/// set containment at each matched position.
inline bool is_sub_episode(const Episode& beta, const Episode& alpha) {
  const auto& outer = alpha.sets();
  std::size_t pos = 0;
  for (const auto& set : beta.sets()) {
    while (pos < outer.size() &&
           !std::includes(outer[pos].begin(), outer[pos].end(), set.begin(), set.end())) {
      ++pos;
    }
    if (pos == outer.size()) return false;
    ++pos;
  }
  return true;
}

enum class OrderKind { occurrence, lexicographic, ewu_ascending, ewu_descending };

inline std::string_view to_string(OrderKind kind) {
  switch (kind) {
    case OrderKind::occurrence: return "occ";
    case OrderKind::lexicographic: return "lexi";
    case OrderKind::ewu_ascending: return "ewu-asc";
    case OrderKind::ewu_descending: return "ewu-desc";
  }
  return "?";
}

/// Strict total order over the alphabet that drives traversal and remaining
/// utility. rank(a) < rank(b) reads "a precedes b".
class ProcessingOrder {
 public:
  ProcessingOrder(OrderKind kind, std::vector<std::uint32_t> rank)
      : kind_(kind), rank_(std::move(rank)) {
    order_.resize(rank_.size());
    for (std::size_t i = 0; i < rank_.size(); ++i) order_.at(rank_[i]) = EventId{static_cast<std::uint32_t>(i)};
  }

  OrderKind kind() const noexcept { return kind_; }
  std::uint32_t rank(EventId e) const { return rank_.at(e.value); }
  bool precedes(EventId a, EventId b) const { return rank(a) < rank(b); }
  std::size_t size() const noexcept { return rank_.size(); }

  /// Events listed from order-minimal to order-maximal.
  const std::vector<EventId>& events() const noexcept { return order_; }

  EventId max_of(std::span<const EventId> set) const {
    EventId best = set.front();
    for (EventId e : set) {
      if (rank(e) > rank(best)) best = e;
    }
    return best;
  }

 private:
  OrderKind kind_;
  std::vector<std::uint32_t> rank_;
  std::vector<EventId> order_;
};

/// EWU-based kinds need one value per alphabet entry.
inline ProcessingOrder build_order(const EventSequence& s, OrderKind kind,
                                   const std::optional<std::vector<Utility>>& ewu_values = std::nullopt) {
  const std::size_t n = s.alphabet().size();
  std::vector<std::uint32_t> ids(n);
  for (std::uint32_t i = 0; i < n; ++i) ids[i] = i;

  // Ties always fall back to lexicographic order, which is id order.
  switch (kind) {
    case OrderKind::lexicographic:
      break;
    case OrderKind::occurrence: {
      std::vector<std::size_t> first(n, std::numeric_limits<std::size_t>::max());
      for (std::uint32_t i = 0; i < n; ++i) {
        auto pos = s.positions(EventId{i});
        if (!pos.empty()) first[i] = pos.front();
      }
      std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) { return first[a] < first[b]; });
      break;
    }
    case OrderKind::ewu_ascending:
    case OrderKind::ewu_descending: {
      if (!ewu_values) throw Error(ErrorKind::MissingEwu, "EWU-based order requires per-event EWU values");
      if (ewu_values->size() != n) throw Error(ErrorKind::MissingEwu, "EWU values do not cover the alphabet");
      const auto& w = *ewu_values;
      if (kind == OrderKind::ewu_ascending) {
        std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) { return w[a] < w[b]; });
      } else {
        std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) { return w[a] > w[b]; });
      }
      break;
    }
  }
  std::vector<std::uint32_t> rank(n);
  for (std::uint32_t r = 0; r < n; ++r) rank[ids[r]] = r;
  return ProcessingOrder(kind, std::move(rank));
}

/// Canonical parent in the sequence tree: drops the order-maximal event of the
/// last set. Nullopt for 1-episodes.
inline std::optional<Episode> canonical_parent(const Episode& beta, const ProcessingOrder& order) {
  return drop_event(beta, order.max_of(beta.last_set()));
}

}  // namespace umepi
