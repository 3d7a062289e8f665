#include <gtest/gtest.h>

#include <map>
#include <set>

#include "support.hpp"

namespace umepi {
namespace {

using test::config_of;
using test::ep;

std::string names(const std::vector<EventId>& ids, const EventSequence& s) {
  std::string out;
  for (EventId e : ids) out += s.alphabet().name(e);
  return out;
}

class MinerTest : public ::testing::Test {
 protected:
  NativeDocument doc = test::running_example();
  const EventSequence& s = doc.sequence;
  ProcessingOrder lexi = build_order(s, OrderKind::lexicographic);
};

TEST(MinUtilTest, ParsesExactRatios) {
  EXPECT_EQ(MinUtil::from_decimal("0.5").to_string(), "1/2");
  EXPECT_EQ(MinUtil::from_decimal(".05").to_string(), "1/20");
  EXPECT_EQ(MinUtil::from_decimal("1").to_string(), "1/1");
  EXPECT_EQ(MinUtil::from_decimal("1/3").to_string(), "1/3");
  EXPECT_EQ(MinUtil::from_decimal("0.30").to_string(), "3/10");
  for (const char* bad : {"", ".", "1.5", "2", "-0.1", "0.5x", "1/0", "abc", "3/2"}) {
    EXPECT_THROW(MinUtil::from_decimal(bad), Error) << bad;
  }
  EXPECT_THROW(MinUtil::absolute(-1), Error);
}

TEST(MinUtilTest, ComparisonIsNoLessThan) {
  const auto half = MinUtil::from_decimal("0.5");
  EXPECT_TRUE(half.admits(47, 94));
  EXPECT_FALSE(half.admits(46, 94));
  const auto third = MinUtil::ratio(1, 3);
  EXPECT_TRUE(third.admits(1, 3));
  EXPECT_FALSE(third.admits(333333, 1000000));
  EXPECT_TRUE(MinUtil::absolute(10).admits(10, 0));
  EXPECT_FALSE(MinUtil::absolute(10).admits(9, 1000));
  // No overflow near the top of the range.
  const Utility big = std::numeric_limits<Utility>::max();
  EXPECT_TRUE(MinUtil::ratio(999, 1000).admits(big, big));
}

TEST(MiningConfigTest, Validation) {
  MiningConfig c;
  c.mtd = -1;
  EXPECT_THROW(c.validate(), Error);
  c.mtd = 0;
  c.threads = 0;
  EXPECT_THROW(c.validate(), Error);
  c.threads = 1;
  c.max_episode_length = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST_F(MinerTest, GoldenOutputInEveryConfiguration) {
  const std::map<std::string, Utility> expected{{"{B,C}->{A,D,E}->{D,E}", 47},
                                                {"D->B->{A,D}", 49},
                                                {"{D,E}->B->{B,D}", 49},
                                                {"{D,E}->B->{A,B,D}", 51},
                                                {"E->B->{A,B,D}", 48}};
  for (EwuVariant v : test::kVariants) {
    for (OrderKind o : test::kOrders) {
      for (ExtensionMode m : test::kModes) {
        const auto result = mine(s, config_of(2, MinUtil::from_decimal("0.5"), v, o, m));
        std::map<std::string, Utility> got;
        for (const auto& h : result.hues) got.emplace(test::show(h.episode, s), h.utility);
        EXPECT_EQ(got, expected) << to_string(v) << " " << to_string(o) << " " << to_string(m);
      }
    }
  }
}

TEST_F(MinerTest, OneEpisodeSummaries) {
  const auto sums = one_episode_summaries(s, 2, EwuVariant::opt1, lexi);
  ASSERT_EQ(sums.size(), 5u);
  const std::vector<Utility> ewu{110, 105, 90, 161, 94};
  const std::vector<Utility> util{9, 30, 10, 24, 21};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(sums[i].ewu, ewu[i]);
    EXPECT_EQ(sums[i].utility, util[i]);
    EXPECT_EQ(sums[i].mo_set, compute_moset(Episode::singleton(sums[i].event), s, 2));
  }
  const auto opt2 = one_episode_summaries(s, 2, EwuVariant::opt2, lexi);
  EXPECT_EQ(opt2[3].ewu, 136);
}

TEST_F(MinerTest, EwuOrdersRankByOneEpisodeOpt1) {
  // opt1 totals at MTD 2 are A110 B105 C90 D161 E94.
  EXPECT_EQ(names(mining_order(s, OrderKind::ewu_ascending, 2).events(), s), "CEBAD");
  EXPECT_EQ(names(mining_order(s, OrderKind::ewu_descending, 2).events(), s), "DABEC");
}

TEST_F(MinerTest, SimultaneousCandidates) {
  const auto a = ep(s, "A");
  const auto mo_a = compute_moset(a, s, 2);
  EXPECT_EQ(names(collect_simult_candidates(a, mo_a, s, 2, lexi, ExtensionMode::paper), s), "BCDE");
  const auto b = ep(s, "B");
  EXPECT_EQ(names(collect_simult_candidates(b, compute_moset(b, s, 2), s, 2, lexi, ExtensionMode::paper), s), "CD");
  const auto e = ep(s, "E");
  EXPECT_TRUE(collect_simult_candidates(e, compute_moset(e, s, 2), s, 2, lexi, ExtensionMode::strict).empty());

  const auto gap = test::gap_example();
  const auto& g = gap.sequence;
  const auto ab = ep(g, "A->B");
  const auto gl = build_order(g, OrderKind::lexicographic);
  const auto mo_ab = compute_moset(ab, g, 3);
  EXPECT_TRUE(collect_simult_candidates(ab, mo_ab, g, 3, gl, ExtensionMode::paper).empty());
  EXPECT_EQ(names(collect_simult_candidates(ab, mo_ab, g, 3, gl, ExtensionMode::strict), g), "C");
}

TEST_F(MinerTest, SerialCandidates) {
  const auto de = ep(s, "{D,E}");
  EXPECT_EQ(names(collect_serial_candidates(de, compute_moset(de, s, 2), s, 2, lexi), s), "ABDE");
  const auto b = ep(s, "B");
  EXPECT_EQ(names(collect_serial_candidates(b, compute_moset(b, s, 2), s, 2, lexi), s), "ABDE");
  EXPECT_TRUE(collect_serial_candidates(ep(s, "D"), {{6, 6}}, s, 2, lexi).empty());
  EXPECT_TRUE(collect_serial_candidates(b, compute_moset(b, s, 0), s, 0, lexi).empty());
  // Candidates come out in processing order.
  const auto asc = mining_order(s, OrderKind::ewu_ascending, 2);
  EXPECT_EQ(names(collect_serial_candidates(b, compute_moset(b, s, 2), s, 2, asc), s), "EBAD");
}

TEST_F(MinerTest, ThresholdEdges) {
  EXPECT_TRUE(mine(s, config_of(3, MinUtil::absolute(1000))).hues.empty());
  EXPECT_TRUE(mine(s, config_of(3, MinUtil::ratio(1, 1))).hues.empty());
  const auto all = mine(s, config_of(1, MinUtil::ratio(0, 1)));
  EXPECT_EQ(all.hues.size(), enumerate_episodes(s, 1).size());
}

TEST_F(MinerTest, ResultsAreSortedAndConsistent) {
  const auto result = mine(s, config_of(3, MinUtil::from_decimal("0.3")));
  ASSERT_FALSE(result.hues.empty());
  for (std::size_t i = 0; i < result.hues.size(); ++i) {
    const auto& h = result.hues[i];
    EXPECT_EQ(h.mo_set, compute_moset(h.episode, s, 3));
    EXPECT_EQ(h.utility, episode_utility(h.episode, h.mo_set, s));
    if (i > 0) {
      const auto& p = result.hues[i - 1];
      EXPECT_TRUE(p.utility > h.utility ||
                  (p.utility == h.utility && test::show(p.episode, s) < test::show(h.episode, s)));
    }
  }
  std::size_t long_hues = 0;
  for (const auto& h : result.hues) long_hues += h.episode.length() >= 2 ? 1 : 0;
  EXPECT_GE(result.stats.candidates_visited, long_hues);
}

TEST_F(MinerTest, LengthCapTruncatesTheTree) {
  auto config = config_of(3, MinUtil::from_decimal("0.3"));
  config.max_episode_length = 3;
  const auto capped = mine(s, config);
  const auto full = mine(s, config_of(3, MinUtil::from_decimal("0.3")));
  std::size_t expected = 0;
  for (const auto& h : full.hues) expected += h.episode.length() <= 3 ? 1 : 0;
  EXPECT_EQ(capped.hues.size(), expected);
  EXPECT_LE(capped.stats.max_depth, 3u);
}

TEST_F(MinerTest, ObserverSeesEachEpisodeOnceAlongItsCanonicalPath) {
  for (OrderKind kind : test::kOrders) {
    auto config = config_of(3, MinUtil::from_decimal("0.3"), EwuVariant::opt2, kind);
    std::set<Episode> seen;
    std::size_t extensions = 0;
    std::size_t duplicates = 0;
    const auto order = mining_order(s, kind, 3);
    bool parents_ok = true;
    const auto result = mine(s, config, [&](const CandidateView& v) {
      if (!seen.insert(v.episode).second) ++duplicates;
      if (v.growth == Growth::root) return;
      ++extensions;
      const auto parent = canonical_parent(v.episode, order);
      parents_ok = parents_ok && parent && seen.contains(*parent);
    });
    EXPECT_EQ(duplicates, 0u);
    EXPECT_TRUE(parents_ok);
    EXPECT_EQ(extensions, result.stats.candidates_visited);
  }
}

TEST_F(MinerTest, ThreadsDoNotChangeResults) {
  const auto base = mine(s, config_of(3, MinUtil::from_decimal("0.3")));
  for (unsigned t : {2u, 3u, 8u}) {
    auto config = config_of(3, MinUtil::from_decimal("0.3"));
    config.threads = t;
    const auto r = mine(s, config);
    ASSERT_EQ(r.hues.size(), base.hues.size());
    for (std::size_t i = 0; i < r.hues.size(); ++i) {
      EXPECT_EQ(r.hues[i].episode, base.hues[i].episode);
      EXPECT_EQ(r.hues[i].utility, base.hues[i].utility);
      EXPECT_EQ(r.hues[i].mo_set, base.hues[i].mo_set);
    }
    EXPECT_EQ(r.stats.candidates_visited, base.stats.candidates_visited);
  }
}

TEST_F(MinerTest, FixtureCountsAtMtdThree) {
  // Exact counts by exhaustive enumeration of the running example.
  const std::vector<std::pair<const char*, std::size_t>> strict{{"0.30", 916}, {"0.35", 738}, {"0.40", 494},
                                                                {"0.45", 312}, {"0.50", 180}, {"0.55", 72}};
  for (const auto& [ratio, count] : strict) {
    EXPECT_EQ(mine(s, config_of(3, MinUtil::from_decimal(ratio))).hues.size(), count) << ratio;
  }
}

// Paper-mode output is a subset of strict-mode output, and never reports a
// utility above the exact one.
class MinerModes : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MinerModes, PaperModeUnderApproximatesStrictMode) {
  const auto doc = test::random_sequence(GetParam());
  const auto& s = doc.sequence;
  for (Time mtd : {1, 2, 3}) {
    for (OrderKind kind : test::kOrders) {
      const auto strict = test::as_map(
          mine(s, config_of(mtd, MinUtil::ratio(1, 10), EwuVariant::opt2, kind, ExtensionMode::strict)).hues);
      const auto paper = test::as_map(
          mine(s, config_of(mtd, MinUtil::ratio(1, 10), EwuVariant::opt2, kind, ExtensionMode::paper)).hues);
      for (const auto& [episode, u] : paper) {
        auto it = strict.find(episode);
        ASSERT_NE(it, strict.end()) << test::show(episode, s);
        ASSERT_LE(u, it->second) << test::show(episode, s);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, MinerModes, ::testing::Range<std::uint64_t>(500, 540));

}  // namespace
}  // namespace umepi
