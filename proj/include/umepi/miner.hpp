#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "umepi/codec.hpp"
#include "umepi/model.hpp"
#include "umepi/occurrence.hpp"
#include "umepi/utility.hpp"

namespace umepi {

/// Minimum-utility threshold: an exact ratio of TU or an absolute value.
/// Comparison is "no less than".
class MinUtil {
 public:
  static MinUtil ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw Error(ErrorKind::InvalidConfig, "minUtil denominator is zero");
    if (num > den) throw Error(ErrorKind::InvalidConfig, "minUtil ratio exceeds 1");
    const auto g = std::gcd(num, den);
    return MinUtil(Ratio{num / (g ? g : 1), den / (g ? g : 1)});
  }

  static MinUtil absolute(Utility value) {
    if (value < 0) throw Error(ErrorKind::InvalidConfig, "absolute minUtil is negative");
    return MinUtil(value);
  }

  /// Parses "0.5", ".05", "1" or "1/3" exactly.
  static MinUtil from_decimal(std::string_view text) {
    auto fail = [&] { return Error(ErrorKind::InvalidConfig, "invalid minUtil '" + std::string(text) + "'"); };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      auto n = detail::parse_int(text.substr(0, slash));
      auto d = detail::parse_int(text.substr(slash + 1));
      if (!n || !d || *n < 0 || *d <= 0) throw fail();
      return ratio(static_cast<std::uint64_t>(*n), static_cast<std::uint64_t>(*d));
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || frac.size() > 18) throw fail();
    for (char c : whole) if (c < '0' || c > '9') throw fail();
    for (char c : frac) if (c < '0' || c > '9') throw fail();
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    if (whole.size() > 18) throw fail();
    std::uint64_t w = whole.empty() ? 0 : static_cast<std::uint64_t>(*detail::parse_int(whole));
    std::uint64_t f = frac.empty() ? 0 : static_cast<std::uint64_t>(*detail::parse_int(frac));
    if (w > 1) throw Error(ErrorKind::InvalidConfig, "minUtil ratio exceeds 1");
    return ratio(w * den + f, den);
  }

  bool admits(Utility value, Utility total) const {
    if (const auto* r = std::get_if<Ratio>(&value_)) {
      return static_cast<__int128>(value) * static_cast<__int128>(r->den) >=
             static_cast<__int128>(r->num) * static_cast<__int128>(total);
    }
    return value >= std::get<Utility>(value_);
  }

  bool is_ratio() const noexcept { return std::holds_alternative<Ratio>(value_); }

  std::string to_string() const {
    if (const auto* r = std::get_if<Ratio>(&value_)) return std::to_string(r->num) + "/" + std::to_string(r->den);
    return std::to_string(std::get<Utility>(value_)) + " (absolute)";
  }

 private:
  struct Ratio {
    std::uint64_t num;
    std::uint64_t den;
  };
  explicit MinUtil(Ratio r) : value_(r) {}
  explicit MinUtil(Utility a) : value_(a) {}

  std::variant<Ratio, Utility> value_;
};

struct MiningConfig {
  Time mtd = 0;
  MinUtil min_util = MinUtil::ratio(0, 1);
  EwuVariant ewu = EwuVariant::opt2;
  OrderKind order = OrderKind::ewu_ascending;
  ExtensionMode mode = ExtensionMode::strict;
  std::optional<std::size_t> max_episode_length;
  unsigned threads = 1;

  void validate() const {
    if (mtd < 0) throw Error(ErrorKind::InvalidConfig, "MTD must be non-negative");
    if (threads == 0) throw Error(ErrorKind::InvalidConfig, "thread count must be positive");
    if (max_episode_length && *max_episode_length == 0) {
      throw Error(ErrorKind::InvalidConfig, "maximum episode length must be positive");
    }
  }
};

struct MineStats {
  std::uint64_t candidates_visited = 0;  // extensions with a non-empty moSet that were evaluated
  std::uint64_t pruned_by_ewu = 0;
  std::size_t max_depth = 0;  // longest evaluated episode length
  std::chrono::nanoseconds elapsed{0};

  void merge(const MineStats& other) {
    candidates_visited += other.candidates_visited;
    pruned_by_ewu += other.pruned_by_ewu;
    max_depth = std::max(max_depth, other.max_depth);
  }
};

struct OneEpisodeSummary {
  EventId event;
  MoSet mo_set;
  Utility utility = 0;
  Utility ewu = 0;
};

struct MineResult {
  std::vector<HueRecord> hues;
  MineStats stats;
  ProcessingOrder order;
  std::vector<OneEpisodeSummary> one_episodes;
};

enum class Growth { root, simultaneous, serial };

/// What the traversal saw for one evaluated node; handed to an optional observer.
struct CandidateView {
  const Episode& episode;
  MoSet mo_set;
  Utility utility;
  Utility ewu;
  bool promising;
  Growth growth;
};

using CandidateObserver = std::function<void(const CandidateView&)>;

namespace detail {

// Per-entry events sorted by processing rank, with suffix utility sums, for
// O(log n) remaining-utility lookups.
class RankedEntries {
 public:
  RankedEntries(const EventSequence& s, const ProcessingOrder& order) {
    ranks_.resize(s.size());
    suffix_.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<std::pair<std::uint32_t, Utility>> row;
      for (const auto& rec : s.entry(i).events) row.emplace_back(order.rank(rec.event), rec.utility);
      std::sort(row.begin(), row.end());
      auto& r = ranks_[i];
      auto& suf = suffix_[i];
      r.resize(row.size());
      suf.assign(row.size() + 1, 0);
      for (std::size_t k = row.size(); k-- > 0;) {
        r[k] = row[k].first;
        suf[k] = suf[k + 1] + row[k].second;
      }
    }
  }

  // Utility at entry `index` of events ranked strictly above `top`.
  Utility remaining(std::size_t index, std::uint32_t top) const {
    const auto& r = ranks_[index];
    auto it = std::upper_bound(r.begin(), r.end(), top);
    return suffix_[index][static_cast<std::size_t>(it - r.begin())];
  }

 private:
  std::vector<std::vector<std::uint32_t>> ranks_;
  std::vector<std::vector<Utility>> suffix_;
};

inline std::vector<EventId> sorted_by_rank(std::vector<std::uint32_t> ranks, const ProcessingOrder& order) {
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  std::vector<EventId> out;
  out.reserve(ranks.size());
  for (auto r : ranks) out.push_back(order.events()[r]);
  return out;
}

inline std::vector<EventId> simult_candidates(const EventSequence& s, const std::vector<Occurrence>& occs,
                                              std::span<const EventId> last_set, Time mtd,
                                              const ProcessingOrder& order, ExtensionMode mode) {
  const std::uint32_t top = order.rank(order.max_of(last_set));
  std::vector<std::uint32_t> ranks;
  auto take = [&](std::size_t index) {
    for (const auto& rec : s.entry(index).events) {
      const auto r = order.rank(rec.event);
      if (r > top) ranks.push_back(r);
    }
  };
  for (const auto& occ : occs) {
    if (mode == ExtensionMode::paper) {
      take(occ.end);
      continue;
    }
    const Time limit = limit_time(s, occ.start, mtd);
    for (std::size_t t = occ.end; t < s.size() && s.time(t) <= limit; ++t) {
      if (t == occ.end || s.entry(t).contains_all(last_set)) take(t);
    }
  }
  return sorted_by_rank(std::move(ranks), order);
}

inline std::vector<EventId> serial_candidates(const EventSequence& s, const std::vector<Occurrence>& occs, Time mtd,
                                              const ProcessingOrder& order) {
  std::vector<std::uint32_t> ranks;
  for (const auto& occ : occs) {
    const Time limit = limit_time(s, occ.start, mtd);
    for (std::size_t t = occ.end + 1; t < s.size() && s.time(t) <= limit; ++t) {
      for (const auto& rec : s.entry(t).events) ranks.push_back(order.rank(rec.event));
    }
  }
  return sorted_by_rank(std::move(ranks), order);
}

class Traversal {
 public:
  Traversal(const EventSequence& s, const MiningConfig& config, const ProcessingOrder& order,
            const RankedEntries& ranked, const std::vector<std::uint32_t>& window_end,
            const CandidateObserver* observer, std::mutex* observer_mutex)
      : s_(s),
        config_(config),
        order_(order),
        ranked_(ranked),
        window_end_(window_end),
        observer_(observer),
        observer_mutex_(observer_mutex) {}

  struct Node {
    Episode episode;
    std::vector<Occurrence> occs;
  };

  struct Score {
    Utility utility = 0;
    Utility ewu = 0;
  };

  Score score(const Node& node) const {
    const std::uint32_t top = order_.rank(order_.max_of(node.episode.last_set()));
    Score out;
    for (const auto& occ : node.occs) {
      out.utility += occ.prefix + occ.last;
      const Utility after = s_.tu_range(occ.end + 1, window_end_[occ.start]);
      const Utility ru = config_.ewu == EwuVariant::opt2 ? ranked_.remaining(occ.end, top) : 0;
      out.ewu += ewu_formula(config_.ewu, occ.prefix, occ.last, s_.tu_at(occ.end), ru, after);
    }
    return out;
  }

  bool passes(Utility value) const { return config_.min_util.admits(value, s_.total_utility()); }

  void notify(const Node& node, const Score& sc, bool promising, Growth growth) const {
    if (!observer_ || !*observer_) return;
    CandidateView view{node.episode, to_moset(s_, node.occs), sc.utility, sc.ewu, promising, growth};
    std::lock_guard lock(*observer_mutex_);
    (*observer_)(view);
  }

  // Explores every simultaneous then serial extension of a promising node.
  void span(const Node& node) {
    if (config_.max_episode_length && node.episode.length() >= *config_.max_episode_length) return;
    const auto& last = node.episode.last_set();

    for (EventId e : simult_candidates(s_, node.occs, last, config_.mtd, order_, config_.mode)) {
      Node child{simult_concat(node.episode, e), extend_simult(s_, node.occs, last, e, config_.mtd, config_.mode)};
      visit(child, Growth::simultaneous);
    }
    for (EventId e : serial_candidates(s_, node.occs, config_.mtd, order_)) {
      Node child{serial_concat(node.episode, e), extend_serial(s_, node.occs, e, config_.mtd)};
      visit(child, Growth::serial);
    }
  }

  void visit(const Node& child, Growth growth) {
    if (child.occs.empty()) return;
    ++stats.candidates_visited;
    stats.max_depth = std::max(stats.max_depth, child.episode.length());
    const Score sc = score(child);
    const bool promising = passes(sc.ewu);
    notify(child, sc, promising, growth);
    if (!promising) {
      ++stats.pruned_by_ewu;
      return;
    }
    if (passes(sc.utility)) hues.push_back({child.episode, sc.utility, to_moset(s_, child.occs)});
    span(child);
  }

  std::vector<HueRecord> hues;
  MineStats stats;

 private:
  const EventSequence& s_;
  const MiningConfig& config_;
  const ProcessingOrder& order_;
  const RankedEntries& ranked_;
  const std::vector<std::uint32_t>& window_end_;
  const CandidateObserver* observer_;
  std::mutex* observer_mutex_;
};

inline std::vector<std::uint32_t> window_ends(const EventSequence& s, Time mtd) {
  std::vector<std::uint32_t> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(s.upper_index(limit_time(s, static_cast<std::uint32_t>(i), mtd)));
  }
  return out;
}

}  // namespace detail

/// Per-event moSet, utility and EWU of every 1-episode that occurs.
inline std::vector<OneEpisodeSummary> one_episode_summaries(const EventSequence& s, Time mtd, EwuVariant variant,
                                                            const ProcessingOrder& order) {
  std::vector<OneEpisodeSummary> out;
  for (std::uint32_t i = 0; i < s.alphabet().size(); ++i) {
    const EventId e{i};
    if (s.positions(e).empty()) continue;
    OneEpisodeSummary sum{e, {}, 0, 0};
    for (std::uint32_t p : s.positions(e)) {
      const Utility u = s.entry(p).find(e)->utility;
      const Utility after = s.tu_range(p + 1, s.upper_index(detail::limit_time(s, p, mtd)));
      Utility ru = 0;
      if (variant == EwuVariant::opt2) {
        for (const auto& rec : s.entry(p).events) {
          if (order.rank(rec.event) > order.rank(e)) ru += rec.utility;
        }
      }
      sum.mo_set.push_back({s.time(p), s.time(p)});
      sum.utility += u;
      sum.ewu += detail::ewu_formula(variant, 0, u, s.tu_at(p), ru, after);
    }
    out.push_back(std::move(sum));
  }
  return out;
}

/// Order used for a mining run. EWU-based kinds rank events by their
/// order-independent 1-episode EWU (opt1, equal to tu summed over each window).
inline ProcessingOrder mining_order(const EventSequence& s, OrderKind kind, Time mtd) {
  if (kind != OrderKind::ewu_ascending && kind != OrderKind::ewu_descending) return build_order(s, kind);
  auto lexi = build_order(s, OrderKind::lexicographic);
  std::vector<Utility> values(s.alphabet().size(), 0);
  for (const auto& sum : one_episode_summaries(s, mtd, EwuVariant::opt1, lexi)) values[sum.event.value] = sum.ewu;
  return build_order(s, kind, values);
}

inline std::vector<EventId> collect_simult_candidates(const Episode& alpha, const MoSet& mo_alpha,
                                                      const EventSequence& s, Time mtd, const ProcessingOrder& order,
                                                      ExtensionMode mode) {
  return detail::simult_candidates(s, detail::from_moset(s, mo_alpha), alpha.last_set(), mtd, order, mode);
}

inline std::vector<EventId> collect_serial_candidates(const Episode& alpha, const MoSet& mo_alpha,
                                                      const EventSequence& s, Time mtd,
                                                      const ProcessingOrder& order) {
  (void)alpha;
  return detail::serial_candidates(s, detail::from_moset(s, mo_alpha), mtd, order);
}

/// Depth-first high-utility episode mining with EWU pruning. Every 1-episode
/// passing the EWU gate roots a subtree; extension events inside a subtree are
/// never filtered by their own 1-episode EWU.
inline MineResult mine(const EventSequence& s, const MiningConfig& config, const CandidateObserver& observer = {}) {
  config.validate();
  if (s.empty()) throw Error(ErrorKind::InvalidConfig, "event sequence is empty");
  const auto started = std::chrono::steady_clock::now();

  auto order = mining_order(s, config.order, config.mtd);
  const detail::RankedEntries ranked(s, order);
  const auto window_end = detail::window_ends(s, config.mtd);
  auto summaries = one_episode_summaries(s, config.mtd, config.ewu, order);

  std::vector<const OneEpisodeSummary*> by_rank(s.alphabet().size(), nullptr);
  for (const auto& sum : summaries) by_rank[order.rank(sum.event)] = &sum;

  std::vector<HueRecord> hues;
  std::vector<EventId> roots;
  const auto admits = [&](Utility v) { return config.min_util.admits(v, s.total_utility()); };
  std::mutex observer_mutex;

  for (const auto* sum : by_rank) {
    if (!sum) continue;
    const Episode ep = Episode::singleton(sum->event);
    const bool promising = admits(sum->ewu);
    if (observer) {
      std::lock_guard lock(observer_mutex);
      observer(CandidateView{ep, sum->mo_set, sum->utility, sum->ewu, promising, Growth::root});
    }
    if (!promising) continue;
    if (admits(sum->utility)) hues.push_back({ep, sum->utility, sum->mo_set});
    roots.push_back(sum->event);
  }

  MineStats stats;
  auto run_root = [&](detail::Traversal& tr, EventId e) {
    detail::Traversal::Node node{Episode::singleton(e), detail::single_event_occurrences(s, e)};
    tr.stats.max_depth = std::max<std::size_t>(tr.stats.max_depth, 1);
    tr.span(node);
  };

  const unsigned workers = std::min<unsigned>(config.threads, static_cast<unsigned>(std::max<std::size_t>(roots.size(), 1)));
  if (workers <= 1) {
    detail::Traversal tr(s, config, order, ranked, window_end, &observer, &observer_mutex);
    for (EventId e : roots) run_root(tr, e);
    stats.merge(tr.stats);
    hues.insert(hues.end(), tr.hues.begin(), tr.hues.end());
  } else {
    std::vector<detail::Traversal> traversals;
    traversals.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      traversals.emplace_back(s, config, order, ranked, window_end, &observer, &observer_mutex);
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = next++; i < roots.size(); i = next++) run_root(traversals[w], roots[i]);
      });
    }
    for (auto& t : pool) t.join();
    for (auto& tr : traversals) {
      stats.merge(tr.stats);
      hues.insert(hues.end(), std::make_move_iterator(tr.hues.begin()), std::make_move_iterator(tr.hues.end()));
    }
  }

  sort_hues(hues, s.alphabet());
  stats.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
  return MineResult{std::move(hues), stats, std::move(order), std::move(summaries)};
}

}  // namespace umepi
