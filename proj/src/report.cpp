// SPDX-License-Identifier: Apache-2.0

#include "twm/report.hpp"

#include <string>

namespace twm::report {

using nlohmann::json;

namespace {

json versioned(json body) {
  body["schemaVersion"] = kSchemaVersion;
  return body;
}

json read_json(const ReadRecord& r, unsigned width) {
  return {{"opIndex", r.op_index},
          {"element", r.element},
          {"address", r.address},
          {"observed", format_word(r.observed, width)},
          {"expected", format_word(r.expected, width)}};
}

json words_json(std::span<const std::uint64_t> words, unsigned width) {
  json out = json::array();
  for (auto w : words) out.push_back(format_word(w, width));
  return out;
}

json fault_list(std::span<const FaultDescriptor> faults) {
  json out = json::array();
  for (const auto& f : faults) out.push_back(format_fault(f));
  return out;
}

}  // namespace

json march_json(const MarchTest& test) {
  const OpCounts c = count_ops(test);
  return {{"text", format_march(test)},
          {"orientation", test.orientation == Orientation::Bit ? "bit" : "word"},
          {"elements", test.elements.size()},
          {"ops", c.total},
          {"reads", c.reads},
          {"writes", c.writes}};
}

json trace_json(const TransformTrace& trace) {
  json steps = json::array();
  for (auto s : trace.steps) steps.push_back(std::string(step_name(s)));
  json backgrounds = json::array();
  for (unsigned i = 0; i <= ceil_log2(trace.width); ++i)
    backgrounds.push_back(background_pattern(i, trace.width).to_string());
  const MarchTest sig = signature_prediction(trace.output);
  const ExactComplexity exact = exact_complexity(trace);
  return versioned({{"kind", "transformTrace"},
                    {"width", trace.width},
                    {"backgrounds", backgrounds},
                    {"input", march_json(trace.input)},
                    {"smarch", march_json(trace.smarch)},
                    {"tsmarch", march_json(trace.tsmarch)},
                    {"atmarch", march_json(trace.atmarch)},
                    {"output", march_json(trace.output)},
                    {"signaturePrediction", march_json(sig)},
                    {"steps", steps},
                    {"tsmarchFinalState",
                     std::string(final_state_name(trace.final_state))},
                    {"tcmExact", exact.tcm},
                    {"tcpExact", exact.tcp}});
}

json outcome_json(const TestOutcome& outcome, unsigned width) {
  json reads = json::array();
  for (const auto& r : outcome.reads) reads.push_back(read_json(r, width));
  json mismatches = json::array();
  for (const auto& r : outcome.mismatches)
    mismatches.push_back(read_json(r, width));
  json first = nullptr;
  if (outcome.first_mismatch) first = *outcome.first_mismatch;
  return versioned({{"kind", "testOutcome"},
                    {"width", width},
                    {"words", outcome.initial_snapshot.size()},
                    {"readCount", outcome.read_count},
                    {"mismatchCount", outcome.mismatch_count},
                    {"firstMismatch", first},
                    {"transparent", outcome.transparent},
                    {"detected", outcome.detected},
                    {"initialSnapshot", words_json(outcome.initial_snapshot, width)},
                    {"finalContent", words_json(outcome.final_content, width)},
                    {"readStream", reads},
                    {"mismatches", mismatches}});
}

json signature_json(const Signature& expected, const Signature& observed,
                    const SignatureVerdict& verdict) {
  const auto hex = [](std::uint64_t v, unsigned degree) {
    std::string s;
    const unsigned digits = (degree + 3) / 4;
    for (unsigned d = digits; d-- > 0;)
      s.push_back("0123456789abcdef"[(v >> (4 * d)) & 0xF]);
    return s;
  };
  json divergence = nullptr;
  if (verdict.divergence) divergence = *verdict.divergence;
  const auto& p = expected.polynomial;
  return versioned({{"kind", "signature"},
                    {"polynomialDegree", p.degree},
                    {"polynomialTaps", hex(p.taps, p.degree)},
                    {"seed", hex(expected.seed, p.degree)},
                    {"expected", hex(expected.compacted, p.degree)},
                    {"observed", hex(observed.compacted, p.degree)},
                    {"expectedLength", expected.stream.size()},
                    {"observedLength", observed.stream.size()},
                    {"pass", verdict.pass},
                    {"divergence", divergence},
                    {"aliased", verdict.aliased}});
}

json coverage_json(const CoverageReport& report, CoverageMode mode) {
  json kinds = json::array();
  for (const auto& a : report.aggregates) {
    kinds.push_back({{"kind", std::string(fault_kind_name(a.kind))},
                     {"total", a.total},
                     {"strictDetected", a.strict_detected},
                     {"anyDetected", a.any_detected},
                     {"strictPercent", a.percent(CoverageMode::Strict)},
                     {"anyPercent", a.percent(CoverageMode::Any)},
                     {"intraTotal", a.intra_total},
                     {"intraStrict", a.intra_strict},
                     {"interTotal", a.inter_total},
                     {"interStrict", a.inter_strict}});
  }
  std::vector<FaultDescriptor> missed;
  for (const auto& v : report.per_fault)
    if (!v.detected(mode)) missed.push_back(v.fault);
  return versioned({{"kind", "coverage"},
                    {"mode", std::string(coverage_mode_name(mode))},
                    {"words", report.words},
                    {"width", report.width},
                    {"contents", report.contents_tried},
                    {"total", report.total()},
                    {"detected", report.detected(mode)},
                    {"percent", report.percent(mode)},
                    {"perKind", kinds},
                    {"undetected", fault_list(missed)}});
}

json equivalence_json(const EquivalenceReport& report) {
  return versioned({{"kind", "equivalence"},
                    {"mode", std::string(coverage_mode_name(report.mode))},
                    {"verdict", report.equal() ? "EQUAL" : "DIFFERENT"},
                    {"total", report.total},
                    {"detectedFirst", report.detected_first},
                    {"detectedSecond", report.detected_second},
                    {"onlyFirst", fault_list(report.only_first)},
                    {"onlySecond", fault_list(report.only_second)}});
}

json complexity_json(std::span<const ComparisonRow> rows) {
  json out = json::array();
  for (const auto& row : rows) {
    for (const ComplexityResult* r : {&row.scheme1, &row.scheme2, &row.proposed}) {
      json tcp = nullptr;
      if (r->tcp) tcp = *r->tcp;
      out.push_back({{"test", row.test},
                     {"width", row.width},
                     {"scheme", std::string(scheme_name(r->scheme))},
                     {"tcm", r->tcm},
                     {"tcp", tcp},
                     {"total", r->total()}});
    }
    if (row.exact) {
      out.push_back({{"test", row.test},
                     {"width", row.width},
                     {"scheme", "EXACT"},
                     {"tcm", row.exact->tcm},
                     {"tcp", row.exact->tcp},
                     {"total", row.exact->total()}});
    }
  }
  return versioned({{"kind", "complexity"}, {"rows", out}});
}

}  // namespace twm::report
