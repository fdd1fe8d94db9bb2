// SPDX-License-Identifier: Apache-2.0
//
// Test-time complexity (operations per word) of three transparent
// word-oriented schemes:
//   PROPOSED : TCM = P + 5*L,        TCP = Q + 2*L
//   SCHEME1  : TCM = P*(L + 1),      TCP = Q*(L + 1)   (bit-by-bit expansion)
//   SCHEME2  : TCM = 4 + 8*B,        TCP = none        (online test)
// where P/Q are the op/read counts of the bit-oriented test and
// L = ceil(log2 B).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twm/march.hpp"
#include "twm/transform.hpp"

namespace twm {

struct OpCounts {
  std::size_t total = 0;
  std::size_t reads = 0;
  std::size_t writes = 0;

  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

OpCounts count_ops(const MarchTest& march);

struct ComplexityParams {
  unsigned P = 0;
  unsigned Q = 0;
  unsigned B = 1;
  unsigned long long N = 1;

  /// Throws std::invalid_argument unless 0 < Q <= P, B >= 1, N >= 1.
  void check() const;
};

enum class Scheme { Proposed, Scheme1, Scheme2 };
std::string_view scheme_name(Scheme scheme);

struct ComplexityResult {
  Scheme scheme = Scheme::Proposed;
  unsigned long long tcm = 0;                 // coefficient of N
  std::optional<unsigned long long> tcp;      // none for SCHEME2
  unsigned long long total() const { return tcm + tcp.value_or(0); }
};

ComplexityResult complexity_proposed(const ComplexityParams& p);
ComplexityResult complexity_scheme1(const ComplexityParams& p);
ComplexityResult complexity_scheme2(const ComplexityParams& p);

struct ExactComplexity {
  std::size_t tcm = 0;
  std::size_t tcp = 0;
  std::size_t total() const { return tcm + tcp; }
};

/// Counts ops of the generated test and reads of its signature test.
ExactComplexity exact_complexity(const TransformTrace& trace);

struct NamedTest {
  std::string name;
  MarchTest test;
};

struct ComparisonRow {
  std::string test;
  unsigned width = 0;
  OpCounts counts;  // P, Q of the raw bit-oriented test
  ComplexityResult scheme1;
  ComplexityResult scheme2;
  ComplexityResult proposed;
  std::optional<ExactComplexity> exact;
};

/// One row per (test, width). P and Q come from the published bit-oriented
/// test; `exact` additionally generates the test with twm_ta.
std::vector<ComparisonRow> comparison_table(std::span<const NamedTest> tests,
                                            std::span<const unsigned> widths,
                                            bool exact = false);

std::string format_table(std::span<const ComparisonRow> rows);

}  // namespace twm
