// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive fault-injection coverage, coverage equivalence between two
// tests, intra-word state-condition analysis and joint-state traces of a
// cell pair.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "twm/march.hpp"
#include "twm/memsim.hpp"

namespace twm {

inline constexpr std::array<FaultKind, 7> kAllFaultKinds{
    FaultKind::Saf0, FaultKind::Saf1, FaultKind::TfUp, FaultKind::TfDown,
    FaultKind::CfSt, FaultKind::CfId, FaultKind::CfIn};

/// Parses a comma-separated kind list: saf, tf, cf, all, or individual kinds
/// (saf0, saf1, tfup, tfdown, cfst, cfid, cfin). An empty string selects
/// nothing.
std::vector<FaultKind> parse_fault_kinds(std::string_view text);

struct FaultUniverse {
  std::size_t words = 0;
  unsigned width = 0;
  std::vector<FaultKind> kinds;
  std::vector<FaultDescriptor> faults;

  std::size_t count(FaultKind kind) const;
  std::size_t intra_word_count() const;
  std::size_t inter_word_count() const;
};

/// All single-cell faults, and for coupling kinds every ordered
/// (victim, aggressor) pair with: CFst x4 (aggressor state x forced value),
/// CFid x4 (transition x forced value), CFin x2 (transition). Ordered by
/// kind, then victim, then aggressor, then polarity.
FaultUniverse enumerate_faults(std::size_t words, unsigned width,
                               std::span<const FaultKind> kinds);

enum class CoverageMode { Strict, Any };
std::string_view coverage_mode_name(CoverageMode mode);

struct FaultVerdict {
  FaultDescriptor fault;
  std::vector<bool> per_content;  // detected with initial content c
  std::optional<std::size_t> first_detecting_read;  // earliest over contents

  bool strict() const;  // detected under every content
  bool any() const;     // detected under some content
  bool detected(CoverageMode mode) const {
    return mode == CoverageMode::Strict ? strict() : any();
  }
};

struct KindAggregate {
  FaultKind kind = FaultKind::Saf0;
  std::size_t total = 0;
  std::size_t strict_detected = 0;
  std::size_t any_detected = 0;
  std::size_t intra_total = 0;
  std::size_t intra_strict = 0;
  std::size_t inter_total = 0;
  std::size_t inter_strict = 0;

  double percent(CoverageMode mode) const;
};

struct CoverageReport {
  std::size_t words = 0;
  unsigned width = 0;
  std::size_t contents_tried = 0;
  std::vector<FaultVerdict> per_fault;
  std::vector<KindAggregate> aggregates;

  std::size_t total() const { return per_fault.size(); }
  std::size_t detected(CoverageMode mode) const;
  double percent(CoverageMode mode) const;
  std::set<FaultDescriptor> detected_set(CoverageMode mode) const;
};

struct EvaluateOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
};

/// Runs `march` once per (fault, initial content).
CoverageReport evaluate(const MarchTest& march, const FaultUniverse& universe,
                        std::span<const std::vector<std::uint64_t>> contents,
                        const EvaluateOptions& options = {});

struct EquivalenceReport {
  CoverageMode mode = CoverageMode::Strict;
  std::size_t total = 0;
  std::size_t detected_first = 0;
  std::size_t detected_second = 0;
  std::vector<FaultDescriptor> only_first;
  std::vector<FaultDescriptor> only_second;

  bool equal() const { return only_first.empty() && only_second.empty(); }
};

EquivalenceReport compare_coverage(const CoverageReport& first,
                                   const CoverageReport& second,
                                   CoverageMode mode = CoverageMode::Strict);

EquivalenceReport equivalence(const MarchTest& first, const MarchTest& second,
                              const FaultUniverse& universe,
                              std::span<const std::vector<std::uint64_t>> contents,
                              CoverageMode mode = CoverageMode::Strict,
                              const EvaluateOptions& options = {});

/// The four intra-word conditions for an ordered bit pair (i, j). Values
/// are relative to the reference content d: a write moves bit i away from
/// (or back to) d_i, leaving bit j at d_j or its complement, and a read
/// then observes the word before either bit changes again.
enum class StateCondition {
  AwayWithRef,   // (d_i -> ~d_i ; d_j)
  AwayWithInv,   // (d_i -> ~d_i ; ~d_j)
  BackWithRef,   // (~d_i -> d_i ; d_j)
  BackWithInv,   // (~d_i -> d_i ; ~d_j)
};
inline constexpr std::array<StateCondition, 4> kAllStateConditions{
    StateCondition::AwayWithRef, StateCondition::AwayWithInv,
    StateCondition::BackWithRef, StateCondition::BackWithInv};
std::string_view state_condition_label(StateCondition c);

struct StateConditionReport {
  unsigned width = 0;
  // covered[(i * width + j) * 4 + condition]
  std::vector<bool> covered;

  bool is_covered(unsigned i, unsigned j, StateCondition c) const;
  bool all_covered() const;
  std::vector<std::tuple<unsigned, unsigned, StateCondition>> uncovered() const;
};

/// Fault-free single-word run with the reference content all-0, so literal
/// and transparent specs both read as values relative to the reference.
StateConditionReport check_state_conditions(const MarchTest& march,
                                            unsigned width);

/// Two members of a traced pair: whole words, or single cells.
struct TracePair {
  Cell first;
  Cell second;
  bool whole_words = false;

  static TracePair words(std::size_t lower, std::size_t higher) {
    return {{lower, 0}, {higher, 0}, true};
  }
  static TracePair cells(Cell a, Cell b) { return {a, b, false}; }
};

struct PairTraceEntry {
  std::size_t op_index = 0;
  std::size_t element = 0;
  std::size_t address = 0;
  Action action = Action::Read;
  std::uint64_t first = 0;   // member value XOR its initial value
  std::uint64_t second = 0;
  friend bool operator==(const PairTraceEntry&, const PairTraceEntry&) = default;
};

struct PairTransition {
  unsigned member = 0;  // 0 = first, 1 = second
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  std::uint64_t other = 0;
  friend auto operator<=>(const PairTransition&, const PairTransition&) = default;
};

struct PairStateTrace {
  TracePair pair;
  std::vector<PairTraceEntry> entries;

  /// Joint relative states visited, including the initial (0, 0).
  std::set<std::pair<std::uint64_t, std::uint64_t>> visited_states() const;
  /// Single-member changes with the other member's relative value.
  std::set<PairTransition> transitions() const;
};

/// Fault-free run recording every op on either member's address.
/// Throws ExecutionError when the pair is out of range or not distinct.
PairStateTrace pair_state_trace(const MarchTest& march, std::size_t words,
                                unsigned width, const TracePair& pair,
                                std::span<const std::uint64_t> initial = {});

}  // namespace twm
