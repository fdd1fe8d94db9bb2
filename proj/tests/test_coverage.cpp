// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "twm/coverage.hpp"
#include "twm/transform.hpp"

using namespace twm;

namespace {

MarchTest builtin(std::string_view name) {
  return parse_march(builtin_march_text(name));
}

std::vector<FaultKind> all_kinds() {
  return {kAllFaultKinds.begin(), kAllFaultKinds.end()};
}

MarchTest concat(const MarchTest& a, const MarchTest& b) {
  MarchTest out = a;
  out.elements.insert(out.elements.end(), b.elements.begin(), b.elements.end());
  return out;
}

}  // namespace

TEST(FaultKinds, Parse) {
  EXPECT_EQ(parse_fault_kinds("all").size(), 7u);
  EXPECT_EQ(parse_fault_kinds("saf"),
            (std::vector<FaultKind>{FaultKind::Saf0, FaultKind::Saf1}));
  EXPECT_EQ(parse_fault_kinds("cf").size(), 3u);
  EXPECT_EQ(parse_fault_kinds("tf_up,CFin"),
            (std::vector<FaultKind>{FaultKind::TfUp, FaultKind::CfIn}));
  EXPECT_EQ(parse_fault_kinds("saf,saf0").size(), 2u);
  EXPECT_TRUE(parse_fault_kinds("").empty());
  EXPECT_THROW(parse_fault_kinds("bogus"), std::invalid_argument);
}

TEST(Universe, ClosedFormCounts) {
  for (std::size_t n : {1u, 2u, 3u, 8u}) {
    for (unsigned b : {1u, 2u, 4u}) {
      const FaultUniverse u = enumerate_faults(n, b, all_kinds());
      const std::size_t cells = n * b;
      const std::size_t pairs = cells * (cells - 1);
      EXPECT_EQ(u.count(FaultKind::Saf0) + u.count(FaultKind::Saf1), 2 * cells);
      EXPECT_EQ(u.count(FaultKind::TfUp) + u.count(FaultKind::TfDown), 2 * cells);
      EXPECT_EQ(u.count(FaultKind::CfSt), 4 * pairs);
      EXPECT_EQ(u.count(FaultKind::CfId), 4 * pairs);
      EXPECT_EQ(u.count(FaultKind::CfIn), 2 * pairs);
      const std::size_t intra_pairs = n * b * (b - 1);
      EXPECT_EQ(u.intra_word_count(), 10 * intra_pairs);
      EXPECT_EQ(u.inter_word_count(), 10 * (pairs - intra_pairs));
    }
  }
  // Two words of two bits: 4 cells, 12 ordered pairs, two transitions each.
  const std::vector<FaultKind> cfin{FaultKind::CfIn};
  EXPECT_EQ(enumerate_faults(2, 2, cfin).faults.size(), 24u);
}

TEST(Universe, UniqueOrderedAndTextRoundTrip) {
  const FaultUniverse u = enumerate_faults(3, 2, all_kinds());
  std::set<FaultDescriptor> seen(u.faults.begin(), u.faults.end());
  EXPECT_EQ(seen.size(), u.faults.size());
  for (std::size_t i = 1; i < u.faults.size(); ++i)
    ASSERT_LE(u.faults[i - 1].kind, u.faults[i].kind);
  for (const auto& f : u.faults) ASSERT_EQ(parse_fault(format_fault(f)), f);
}

TEST(Universe, EmptyKindsGiveEmptyReport) {
  const FaultUniverse u = enumerate_faults(4, 4, {});
  EXPECT_TRUE(u.faults.empty());
  const auto contents = random_contents(4, 4, 2, 1);
  const CoverageReport r = evaluate(builtin("marchc-"), u, contents);
  EXPECT_EQ(r.total(), 0u);
  EXPECT_TRUE(r.aggregates.empty());
  EXPECT_DOUBLE_EQ(r.percent(CoverageMode::Strict), 100.0);
}

TEST(Coverage, SolidMarchCMinusCatchesSingleCellFaults) {
  const FaultUniverse u = enumerate_faults(4, 2, parse_fault_kinds("saf,tf"));
  const auto contents = random_contents(4, 2, 4, 2);
  const CoverageReport r = evaluate(builtin("marchc-"), u, contents);
  EXPECT_EQ(r.detected(CoverageMode::Strict), r.total());
  for (const auto& a : r.aggregates) EXPECT_DOUBLE_EQ(a.percent(CoverageMode::Strict), 100.0);
}

TEST(Coverage, StrictAndAnyDiffer) {
  // An up transition of a bit happens only when its initial value is 0.
  const MarchTest t = parse_march("{ ud:(rD,w1,r1) }");
  const FaultUniverse u = enumerate_faults(2, 4, parse_fault_kinds("tfup"));
  const auto contents = random_contents(2, 4, 16, 5);
  const CoverageReport r = evaluate(t, u, contents);
  EXPECT_EQ(r.detected(CoverageMode::Any), r.total());
  EXPECT_EQ(r.detected(CoverageMode::Strict), 0u);
  const auto& v = r.per_fault.front();
  for (std::size_t c = 0; c < contents.size(); ++c) {
    const bool initially_zero = !((contents[c][v.fault.victim.word] >> v.fault.victim.bit) & 1u);
    EXPECT_EQ(v.per_content[c], initially_zero);
  }
}

TEST(Coverage, ThreadCountDoesNotChangeResult) {
  const FaultUniverse u = enumerate_faults(4, 4, all_kinds());
  const auto contents = random_contents(4, 4, 3, 8);
  const MarchTest t = twm_ta(builtin("marchu"), 4).output;
  const CoverageReport one = evaluate(t, u, contents, {1});
  const CoverageReport many = evaluate(t, u, contents, {5});
  ASSERT_EQ(one.per_fault.size(), many.per_fault.size());
  for (std::size_t i = 0; i < one.per_fault.size(); ++i) {
    ASSERT_EQ(one.per_fault[i].fault, many.per_fault[i].fault);
    ASSERT_EQ(one.per_fault[i].per_content, many.per_fault[i].per_content);
    ASSERT_EQ(one.per_fault[i].first_detecting_read, many.per_fault[i].first_detecting_read);
  }
}

TEST(Coverage, EquivalenceOnSmallMemory) {
  const FaultUniverse u = enumerate_faults(4, 4, all_kinds());
  const auto contents = random_contents(4, 4, 8, 11);
  for (std::string_view name : {"marchc-", "marchu"}) {
    const MarchTest t = builtin(name);
    const EquivalenceReport r = equivalence(
        twm_ta(t, 4).output, nontransparent_reference(t, 4), u, contents);
    EXPECT_TRUE(r.equal()) << name;
    EXPECT_EQ(r.detected_first, r.detected_second);
  }
}

TEST(Coverage, DifferingTestsReported) {
  const FaultUniverse u = enumerate_faults(2, 2, parse_fault_kinds("saf"));
  const auto contents = random_contents(2, 2, 2, 1);
  const EquivalenceReport r =
      equivalence(parse_march("{ ud:(w0); ud:(r0) }"),
                  parse_march("{ ud:(w1); ud:(r1) }"), u, contents);
  EXPECT_FALSE(r.equal());
  EXPECT_EQ(r.only_first.size(), 4u);   // stuck-at-1
  EXPECT_EQ(r.only_second.size(), 4u);  // stuck-at-0
  EXPECT_EQ(r.only_first.front().kind, FaultKind::Saf1);
}

TEST(CoverageProperty, AppendingElementsNeverLosesFaults) {
  std::mt19937_64 rng(17);
  const FaultUniverse u = enumerate_faults(3, 2, all_kinds());
  const auto contents = random_contents(3, 2, 4, 6);
  const std::vector<std::string> pieces{
      "ud:(w0)", "up:(r0,w1)", "dn:(r1,w0)", "ud:(r0)", "up:(rD,w~D)",
      "dn:(r~D,wD)", "ud:(wD@1,rD@1)", "ud:(w1,r1)"};
  for (int iter = 0; iter < 15; ++iter) {
    std::string text = "{ " + pieces[rng() % pieces.size()];
    const unsigned extra = rng() % 3;
    for (unsigned i = 0; i < extra; ++i) text += "; " + pieces[rng() % pieces.size()];
    const MarchTest base = parse_march(text + " }");
    const MarchTest tail = parse_march("{ " + pieces[rng() % pieces.size()] + " }");
    const auto before = evaluate(base, u, contents).detected_set(CoverageMode::Strict);
    const auto after =
        evaluate(concat(base, tail), u, contents).detected_set(CoverageMode::Strict);
    for (const auto& f : before) ASSERT_TRUE(after.count(f)) << format_fault(f);
  }
}

TEST(StateConditions, SolidTestCoversOnlyTwo) {
  const MarchTest smarch = ensure_trailing_read(to_solid_background(builtin("marchc-")));
  const StateConditionReport r = check_state_conditions(smarch, 4);
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < 4; ++j) {
      if (i == j) continue;
      EXPECT_TRUE(r.is_covered(i, j, StateCondition::AwayWithInv));
      EXPECT_TRUE(r.is_covered(i, j, StateCondition::BackWithRef));
      EXPECT_FALSE(r.is_covered(i, j, StateCondition::AwayWithRef));
      EXPECT_FALSE(r.is_covered(i, j, StateCondition::BackWithInv));
    }
  EXPECT_EQ(r.uncovered().size(), 4u * 3u * 2u);
}

TEST(StateConditions, StripesCompleteTheSet) {
  for (unsigned width : {2u, 4u, 8u, 13u}) {
    EXPECT_TRUE(check_state_conditions(
                    nontransparent_reference(builtin("marchc-"), width), width)
                    .all_covered()) << width;
    EXPECT_TRUE(check_state_conditions(twm_ta(builtin("marchu"), width).output, width)
                    .all_covered()) << width;
  }
}

TEST(StateConditions, ReadNeededToObserve) {
  // Writes without a read in between observe nothing.
  const StateConditionReport r =
      check_state_conditions(parse_march("{ ud:(w0,w1,w0) }"), 2);
  EXPECT_EQ(r.uncovered().size(), 8u);
  EXPECT_TRUE(check_state_conditions(parse_march("{ ud:(w0) }"), 1).all_covered());
}

TEST(PairTrace, ReadOnlyTestHasNoTransitions) {
  const PairStateTrace tr =
      pair_state_trace(parse_march("{ ud:(rD) }"), 4, 4, TracePair::words(1, 3));
  EXPECT_EQ(tr.entries.size(), 2u);
  EXPECT_TRUE(tr.transitions().empty());
  EXPECT_EQ(tr.visited_states().size(), 1u);
}

TEST(PairTrace, CellPairUnderMarchCMinusSeesAllTransitions) {
  const MarchTest t = builtin("marchc-");
  for (const auto& pair : {TracePair::cells({0, 0}, {1, 0}), TracePair::cells({2, 1}, {0, 0}),
                           TracePair::cells({1, 1}, {3, 0})}) {
    const PairStateTrace tr = pair_state_trace(t, 4, 2, pair);
    EXPECT_EQ(tr.visited_states().size(), 4u);
    // Each member rises and falls once with the other at 0 and once at 1.
    EXPECT_EQ(tr.transitions().size(), 8u);
  }
}

TEST(PairTrace, TransparentTraceIndependentOfContent) {
  const MarchTest tsmarch = transparentize(builtin("marchc-")).output;
  const TracePair pair = TracePair::cells({0, 1}, {1, 2});
  const PairStateTrace ref = pair_state_trace(tsmarch, 2, 4, pair);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const std::vector<std::uint64_t> init{rng() & 0xF, rng() & 0xF};
    ASSERT_EQ(pair_state_trace(tsmarch, 2, 4, pair, init).entries, ref.entries);
  }
  // Same transition structure as the solid test started from all-0.
  const MarchTest smarch = to_solid_background(builtin("marchc-"));
  const PairStateTrace solid = pair_state_trace(smarch, 2, 4, pair);
  EXPECT_EQ(solid.transitions(), ref.transitions());
  EXPECT_EQ(solid.visited_states(), ref.visited_states());
}

TEST(PairTrace, WholeWordsUnderStripes) {
  const MarchTest t = twm_ta(builtin("marchc-"), 4).output;
  const PairStateTrace tr = pair_state_trace(t, 3, 4, TracePair::words(0, 2));
  std::set<std::uint64_t> first_values;
  for (const auto& e : tr.entries) first_values.insert(e.first);
  // D, ~D and the stripe backgrounds with complements, relative to D.
  EXPECT_EQ(first_values, (std::set<std::uint64_t>{0x0, 0xF, 0x5, 0xA, 0x3, 0xC}));
}

TEST(PairTrace, Errors) {
  const MarchTest t = builtin("marchc-");
  EXPECT_THROW(pair_state_trace(t, 2, 2, TracePair::words(0, 2)), ExecutionError);
  EXPECT_THROW(pair_state_trace(t, 2, 2, TracePair::words(1, 1)), ExecutionError);
  EXPECT_THROW(pair_state_trace(t, 2, 2, TracePair::cells({0, 0}, {0, 2})), ExecutionError);
}
