#include <gtest/gtest.h>

#include "support.hpp"

namespace umepi {
namespace {

using test::ep;

MoSet mo(std::initializer_list<std::pair<Time, Time>> xs) {
  MoSet out;
  for (auto [a, b] : xs) out.push_back({a, b});
  return out;
}

class OccurrenceTest : public ::testing::Test {
 protected:
  NativeDocument doc = test::running_example();
  const EventSequence& s = doc.sequence;
  EventId id(std::string_view name) const { return s.alphabet().id(name); }
};

TEST_F(OccurrenceTest, EarliestEnd) {
  EXPECT_EQ(earliest_end(ep(s, "{A,D}->B"), s, 1), std::optional<Time>(2));
  EXPECT_EQ(earliest_end(ep(s, "D->B"), s, 3), std::optional<Time>(5));
  EXPECT_EQ(earliest_end(ep(s, "E->C"), s, 3), std::nullopt);
  EXPECT_EQ(earliest_end(ep(s, "B"), s, 1), std::nullopt);
  EXPECT_EQ(earliest_end(ep(s, "B"), s, 2), std::optional<Time>(2));
}

TEST_F(OccurrenceTest, ComputeMoSetExamples) {
  EXPECT_EQ(compute_moset(ep(s, "{A,D}->B"), s, 4), mo({{1, 2}, {3, 5}}));
  for (Time mtd : {0, 1, 5, 100}) EXPECT_EQ(compute_moset(ep(s, "D"), s, mtd), mo({{1, 1}, {3, 3}, {4, 4}, {6, 6}}));
  EXPECT_EQ(compute_moset(ep(s, "D->B->{A,D}"), s, 2), mo({{1, 3}, {4, 6}}));
  EXPECT_TRUE(compute_moset(ep(s, "E->C"), s, 10).empty());
}

TEST_F(OccurrenceTest, MtdBoundIsInclusive) {
  EXPECT_EQ(compute_moset(ep(s, "C->B->B"), s, 4), mo({{1, 5}, {2, 6}}));
  EXPECT_TRUE(compute_moset(ep(s, "C->B->B"), s, 3).empty());
  EXPECT_EQ(compute_moset(ep(s, "D->B"), s, 1), mo({{1, 2}, {4, 5}}));
  EXPECT_EQ(compute_moset(ep(s, "D->B"), s, 0), MoSet{});
}

TEST_F(OccurrenceTest, SerialExtensionExamples) {
  const auto mo_d = compute_moset(ep(s, "D"), s, 2);
  EXPECT_EQ(extend_moset_serial(mo_d, ep(s, "D"), id("B"), s, 2), mo({{1, 2}, {4, 5}}));
  const auto mo_de = compute_moset(ep(s, "{D,E}"), s, 2);
  EXPECT_EQ(mo_de, mo({{3, 3}, {4, 4}}));
  EXPECT_EQ(extend_moset_serial(mo_de, ep(s, "{D,E}"), id("B"), s, 2), mo({{4, 5}}));
  EXPECT_TRUE(extend_moset_serial(compute_moset(ep(s, "E"), s, 5), ep(s, "E"), id("C"), s, 5).empty());
  EXPECT_TRUE(extend_moset_serial(mo_d, ep(s, "D"), id("B"), s, 0).empty());
}

TEST_F(OccurrenceTest, SimultaneousExtensionExamples) {
  const auto mo_a = compute_moset(ep(s, "A"), s, 2);
  for (ExtensionMode mode : test::kModes) {
    EXPECT_EQ(extend_moset_simult(mo_a, ep(s, "A"), id("D"), s, 2, mode), mo({{1, 1}, {3, 3}, {6, 6}}));
  }
  try {
    (void)extend_moset_simult(mo_a, ep(s, "A"), id("A"), s, 2, ExtensionMode::strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolation);
  }
}

TEST(OccurrenceGap, PaperModeMissesTheWiderWindow) {
  const auto doc = test::gap_example();
  const auto& s = doc.sequence;
  const auto alpha = ep(s, "A->B");
  const auto mo_alpha = compute_moset(alpha, s, 3);
  EXPECT_EQ(mo_alpha, mo({{2, 3}}));
  const EventId c = s.alphabet().id("C");
  EXPECT_TRUE(extend_moset_simult(mo_alpha, alpha, c, s, 3, ExtensionMode::paper).empty());
  EXPECT_EQ(extend_moset_simult(mo_alpha, alpha, c, s, 3, ExtensionMode::strict), mo({{2, 4}}));
  EXPECT_EQ(compute_moset(ep(s, "A->{B,C}"), s, 3), mo({{2, 4}}));
}

TEST(OccurrenceValidity, StructuralCheck) {
  EXPECT_TRUE(is_valid_moset(mo({{1, 2}, {3, 5}}), 2));
  EXPECT_FALSE(is_valid_moset(mo({{1, 2}, {3, 6}}), 2));
  EXPECT_FALSE(is_valid_moset(mo({{1, 4}, {2, 4}}), 5));
  EXPECT_FALSE(is_valid_moset(mo({{2, 4}, {2, 5}}), 5));
  EXPECT_FALSE(is_valid_moset(mo({{3, 2}}), 5));
}

// Random small instances: every episode the exhaustive enumerator finds, plus
// its one-step extensions.
class OccurrenceProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OccurrenceProperty, AgreesWithNaiveWindowsAndExtendsExactly) {
  test::RandomShape shape;
  shape.max_time_points = 9;
  shape.max_alphabet = 4;
  shape.max_gap = 2;
  const auto doc = test::random_sequence(GetParam(), shape);
  const auto& s = doc.sequence;
  const auto n = static_cast<std::uint32_t>(s.alphabet().size());
  for (Time mtd = 0; mtd <= 3; ++mtd) {
    const auto episodes = enumerate_episodes(s, mtd, {}, 4);
    for (const auto& alpha : episodes) {
      const auto m = compute_moset(alpha, s, mtd);
      ASSERT_EQ(m, test::naive_moset(alpha, s, mtd)) << test::show(alpha, s) << " mtd=" << mtd;
      ASSERT_TRUE(is_valid_moset(m, mtd));
      for (std::uint32_t i = 0; i < n; ++i) {
        const EventId e{i};
        const auto serial = serial_concat(alpha, e);
        const auto exact_serial = compute_moset(serial, s, mtd);
        ASSERT_EQ(extend_moset_serial(m, alpha, e, s, mtd), exact_serial) << test::show(serial, s);
        for (const auto& iv : exact_serial) {
          ASSERT_TRUE(std::any_of(m.begin(), m.end(), [&](const Interval& x) { return x.start == iv.start; }));
        }
        if (alpha.last_set().back() >= e) continue;
        const auto simult = simult_concat(alpha, e);
        const auto exact = compute_moset(simult, s, mtd);
        const auto strict = extend_moset_simult(m, alpha, e, s, mtd, ExtensionMode::strict);
        const auto paper = extend_moset_simult(m, alpha, e, s, mtd, ExtensionMode::paper);
        ASSERT_EQ(strict, exact) << test::show(simult, s) << " mtd=" << mtd;
        ASSERT_TRUE(is_valid_moset(paper, mtd));
        for (const auto& iv : paper) ASSERT_NE(std::find(strict.begin(), strict.end(), iv), strict.end());
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OccurrenceProperty, ::testing::Range<std::uint64_t>(1, 61));

}  // namespace
}  // namespace umepi
