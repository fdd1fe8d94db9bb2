// SPDX-License-Identifier: Apache-2.0

#include "twm/complexity.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "twm/background.hpp"

namespace twm {

OpCounts count_ops(const MarchTest& march) {
  OpCounts c;
  for (const auto& e : march.elements)
    for (const auto& op : e.ops) {
      ++c.total;
      if (op.is_read())
        ++c.reads;
      else
        ++c.writes;
    }
  return c;
}

void ComplexityParams::check() const {
  if (Q == 0 || Q > P)
    throw std::invalid_argument("complexity: require 0 < Q <= P (P=" +
                                std::to_string(P) +
                                ", Q=" + std::to_string(Q) + ")");
  if (B == 0) throw std::invalid_argument("complexity: word width B must be >= 1");
  if (N == 0) throw std::invalid_argument("complexity: word count N must be >= 1");
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Proposed:
      return "PROPOSED";
    case Scheme::Scheme1:
      return "SCHEME1";
    case Scheme::Scheme2:
      return "SCHEME2";
  }
  return "?";
}

ComplexityResult complexity_proposed(const ComplexityParams& p) {
  p.check();
  const unsigned long long l = ceil_log2(p.B);
  return {Scheme::Proposed, p.P + 5 * l, p.Q + 2 * l};
}

ComplexityResult complexity_scheme1(const ComplexityParams& p) {
  p.check();
  const unsigned long long l = ceil_log2(p.B);
  return {Scheme::Scheme1, p.P * (l + 1), p.Q * (l + 1)};
}

ComplexityResult complexity_scheme2(const ComplexityParams& p) {
  p.check();
  return {Scheme::Scheme2, 4 + 8ull * p.B, std::nullopt};
}

ExactComplexity exact_complexity(const TransformTrace& trace) {
  return {count_ops(trace.output).total,
          count_ops(signature_prediction(trace.output)).reads};
}

std::vector<ComparisonRow> comparison_table(std::span<const NamedTest> tests,
                                            std::span<const unsigned> widths,
                                            bool exact) {
  std::vector<ComparisonRow> rows;
  for (const auto& named : tests) {
    const OpCounts c = count_ops(named.test);
    for (unsigned b : widths) {
      const ComplexityParams p{static_cast<unsigned>(c.total),
                               static_cast<unsigned>(c.reads), b, 1};
      ComparisonRow row{named.name,
                        b,
                        c,
                        complexity_scheme1(p),
                        complexity_scheme2(p),
                        complexity_proposed(p),
                        std::nullopt};
      if (exact) row.exact = exact_complexity(twm_ta(named.test, b));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_table(std::span<const ComparisonRow> rows) {
  bool with_exact = false;
  for (const auto& r : rows) with_exact |= r.exact.has_value();

  std::ostringstream os;
  os << std::left << std::setw(12) << "Test" << std::right << std::setw(8)
     << "Width" << std::setw(10) << "Scheme1" << std::setw(10) << "Scheme2"
     << std::setw(10) << "Proposed";
  if (with_exact) os << std::setw(10) << "Exact" << std::setw(8) << "Diff";
  os << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(12) << r.test << std::right << std::setw(8)
       << r.width << std::setw(9) << r.scheme1.total() << 'N' << std::setw(9)
       << r.scheme2.total() << 'N' << std::setw(9) << r.proposed.total()
       << 'N';
    if (r.exact) {
      const long long diff = static_cast<long long>(r.exact->total()) -
                             static_cast<long long>(r.proposed.total());
      os << std::setw(9) << r.exact->total() << 'N' << std::setw(8)
         << (diff > 0 ? "+" : "") + std::to_string(diff);
    }
    os << '\n';
  }
  if (with_exact)
    os << "Exact = ops of the generated test + reads of its signature test;\n"
          "Diff is nonzero when the test needs an extra trailing read or has\n"
          "no pure-write initialization element.\n";
  return os.str();
}

}  // namespace twm
