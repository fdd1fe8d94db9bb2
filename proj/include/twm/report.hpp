// SPDX-License-Identifier: Apache-2.0
//
// JSON serialization of traces, outcomes and reports. Every document carries
// a top-level "schemaVersion".

#pragma once

#include <span>

#include <json.hpp>

#include "twm/complexity.hpp"
#include "twm/coverage.hpp"
#include "twm/memsim.hpp"
#include "twm/transform.hpp"

namespace twm::report {

inline constexpr int kSchemaVersion = 1;

nlohmann::json march_json(const MarchTest& test);
nlohmann::json trace_json(const TransformTrace& trace);
nlohmann::json outcome_json(const TestOutcome& outcome, unsigned width);
nlohmann::json signature_json(const Signature& expected,
                              const Signature& observed,
                              const SignatureVerdict& verdict);
nlohmann::json coverage_json(const CoverageReport& report, CoverageMode mode);
nlohmann::json equivalence_json(const EquivalenceReport& report);
/// Rows {test, width, scheme, tcm, tcp, total}; tcp is null for SCHEME2.
nlohmann::json complexity_json(std::span<const ComparisonRow> rows);

}  // namespace twm::report
