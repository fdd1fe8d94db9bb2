// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "twm/complexity.hpp"
#include "twm/coverage.hpp"
#include "twm/memsim.hpp"
#include "twm/report.hpp"
#include "twm/transform.hpp"

namespace twm::cli {

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::vector<unsigned> widths;
  std::size_t words = 8;
  std::uint64_t seed = 1;
  std::string scheme;
  std::string faults = "all";
  std::string contents = "random";
  std::size_t count = 16;
  std::string mode = "strict";
  std::string format = "text";
  std::vector<std::string> fault_specs;
  bool trace = false;
  bool exact = false;
  bool signature = false;
  unsigned threads = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Builtin name, inline text (anything with a brace) or a file path.
MarchTest load_march(const std::string& input) {
  if (auto text = builtin_march_text(input); !text.empty())
    return parse_march(text);
  if (input.find('{') != std::string::npos) return parse_march(input);
  const std::string text = read_file(input);
  if (std::all_of(text.begin(), text.end(),
                  [](unsigned char c) { return std::isspace(c); }))
    throw EmptyMarchError();
  return parse_march(text);
}

unsigned single_width(const Config& cfg) {
  if (cfg.widths.size() != 1)
    throw std::invalid_argument("exactly one --width is required");
  return cfg.widths.front();
}

MarchTest apply_scheme(const MarchTest& t, const std::string& scheme,
                       unsigned width) {
  if (scheme.empty() || scheme == "none") return t;
  if (scheme == "twmta") return twm_ta(t, width).output;
  if (scheme == "scheme1") return expand_word_oriented(t, width);
  if (scheme == "transparent") return transparentize(t).output;
  if (scheme == "reference") return nontransparent_reference(t, width);
  throw std::invalid_argument("unknown scheme '" + scheme + "'");
}

std::vector<std::vector<std::uint64_t>> load_contents(const Config& cfg,
                                                      unsigned width,
                                                      std::size_t count) {
  if (cfg.contents == "zero")
    return {std::vector<std::uint64_t>(cfg.words, 0)};
  if (cfg.contents == "random")
    return random_contents(cfg.words, width, count, cfg.seed);
  return {parse_hex_lines(read_file(cfg.contents), width)};
}

CoverageMode parse_mode(const std::string& m) {
  return m == "any" ? CoverageMode::Any : CoverageMode::Strict;
}

void print_json(std::ostream& out, const nlohmann::json& j) {
  out << j.dump(2) << '\n';
}

int cmd_parse(const Config& cfg, std::ostream& out, std::ostream& err) {
  const MarchTest t = load_march(cfg.inputs.front());
  const auto diags = validate(t);
  if (cfg.format == "json") {
    nlohmann::json j = report::march_json(t);
    j["schemaVersion"] = report::kSchemaVersion;
    j["kind"] = "march";
    nlohmann::json d = nlohmann::json::array();
    for (const auto& diag : diags) d.push_back(diag.message);
    j["diagnostics"] = d;
    print_json(out, j);
  } else {
    out << format_march(t) << '\n';
    for (const auto& diag : diags) err << "warning: " << diag.message << '\n';
  }
  return kOk;
}

int cmd_transform(const Config& cfg, std::ostream& out) {
  const MarchTest t = load_march(cfg.inputs.front());
  const std::string scheme = cfg.scheme.empty() ? "twmta" : cfg.scheme;
  if (scheme == "twmta") {
    const TransformTrace trace = twm_ta(t, single_width(cfg));
    if (cfg.trace || cfg.format == "json") {
      print_json(out, report::trace_json(trace));
    } else {
      out << format_march(trace.output) << '\n';
    }
    return kOk;
  }
  if (scheme == "none") {
    const TransformTrace trace = transparentize(t);
    if (cfg.trace || cfg.format == "json")
      print_json(out, report::trace_json(trace));
    else
      out << format_march(trace.output) << '\n';
    return kOk;
  }
  const MarchTest result = apply_scheme(t, scheme, single_width(cfg));
  if (cfg.format == "json") {
    nlohmann::json j = report::march_json(result);
    j["schemaVersion"] = report::kSchemaVersion;
    j["kind"] = "march";
    print_json(out, j);
  } else {
    out << format_march(result) << '\n';
  }
  return kOk;
}

int cmd_complexity(const Config& cfg, std::ostream& out) {
  std::vector<NamedTest> tests;
  std::vector<std::string> inputs = cfg.inputs;
  if (inputs.empty())
    for (auto n : builtin_march_names()) inputs.emplace_back(n);
  for (const auto& in : inputs) tests.push_back({in, load_march(in)});
  std::vector<unsigned> widths = cfg.widths;
  if (widths.empty()) widths = {16, 32, 64, 128};
  const auto rows = comparison_table(tests, widths, cfg.exact);
  if (cfg.format == "json")
    print_json(out, report::complexity_json(rows));
  else
    out << format_table(rows);
  return kOk;
}

int cmd_simulate(const Config& cfg, std::ostream& out) {
  const unsigned width = single_width(cfg);
  const MarchTest t = apply_scheme(load_march(cfg.inputs.front()), cfg.scheme,
                                   width);
  const auto contents = load_contents(cfg, width, 1);
  MemoryImage clean(cfg.words, width, contents.front());
  MemoryImage mem = clean;
  for (const auto& f : cfg.fault_specs) mem.inject(parse_fault(f));

  if (cfg.signature) {
    const Signature expected = predict_signature(t, clean);
    const TestOutcome outcome = run(t, mem);
    const Signature observed = observed_signature(outcome, width);
    const SignatureVerdict verdict = compare_signature(expected, observed);
    if (cfg.format == "json") {
      print_json(out, report::signature_json(expected, observed, verdict));
    } else {
      const auto& p = expected.polynomial;
      out << std::hex << std::setfill('0');
      out << "polynomial  degree " << std::dec << p.degree << " taps 0x"
          << std::hex << p.taps << '\n';
      out << "expected    0x" << std::setw(4) << expected.compacted << '\n';
      out << "observed    0x" << std::setw(4) << observed.compacted << '\n';
      out << std::dec << std::setfill(' ');
      out << "verdict     " << (verdict.pass ? "PASS" : "FAIL");
      if (verdict.divergence) out << " (stream differs at read " << *verdict.divergence << ")";
      if (verdict.aliased) out << " (aliased)";
      out << '\n';
    }
    return kOk;
  }

  const TestOutcome outcome = run(t, std::move(mem));
  if (cfg.format == "json") {
    print_json(out, report::outcome_json(outcome, width));
  } else {
    out << "reads       " << outcome.read_count << '\n';
    out << "mismatches  " << outcome.mismatch_count << '\n';
    if (outcome.first_mismatch) {
      const auto& m = outcome.mismatches.front();
      out << "first       read " << *outcome.first_mismatch << " (op "
          << m.op_index << ", address " << m.address << ", expected "
          << format_word(m.expected, width) << ", observed "
          << format_word(m.observed, width) << ")\n";
    }
    out << "transparent " << (outcome.transparent ? "true" : "false") << '\n';
    out << "detected    " << (outcome.detected ? "true" : "false") << '\n';
  }
  return kOk;
}

void print_coverage_text(const CoverageReport& r, CoverageMode mode,
                         std::ostream& out) {
  out << "memory " << r.words << "x" << r.width << ", " << r.contents_tried
      << " initial contents, mode " << coverage_mode_name(mode) << '\n';
  out << std::fixed << std::setprecision(2);
  for (const auto& a : r.aggregates) {
    out << std::left << std::setw(8) << fault_kind_name(a.kind) << std::right
        << std::setw(7) << (mode == CoverageMode::Strict ? a.strict_detected
                                                         : a.any_detected)
        << " / " << std::setw(6) << a.total << std::setw(9) << a.percent(mode)
        << "%\n";
  }
  out << std::left << std::setw(8) << "total" << std::right << std::setw(7)
      << r.detected(mode) << " / " << std::setw(6) << r.total()
      << std::setw(9) << r.percent(mode) << "%\n";
}

int cmd_coverage(const Config& cfg, std::ostream& out) {
  const unsigned width = single_width(cfg);
  const MarchTest t = apply_scheme(load_march(cfg.inputs.front()), cfg.scheme,
                                   width);
  const auto kinds = parse_fault_kinds(cfg.faults);
  const FaultUniverse u = enumerate_faults(cfg.words, width, kinds);
  const auto contents = load_contents(cfg, width, cfg.count);
  const CoverageReport r = evaluate(t, u, contents, {cfg.threads});
  const CoverageMode mode = parse_mode(cfg.mode);
  if (cfg.format == "json")
    print_json(out, report::coverage_json(r, mode));
  else
    print_coverage_text(r, mode, out);
  return kOk;
}

int cmd_equivalence(const Config& cfg, std::ostream& out) {
  const unsigned width = single_width(cfg);
  MarchTest first, second;
  if (cfg.inputs.size() == 1) {
    // The generated transparent test against its nontransparent reference.
    const MarchTest t = load_march(cfg.inputs.front());
    first = twm_ta(t, width).output;
    second = nontransparent_reference(t, width);
  } else {
    first = apply_scheme(load_march(cfg.inputs[0]), cfg.scheme, width);
    second = load_march(cfg.inputs[1]);
  }
  const auto kinds = parse_fault_kinds(cfg.faults);
  const FaultUniverse u = enumerate_faults(cfg.words, width, kinds);
  const auto contents = load_contents(cfg, width, cfg.count);
  const EquivalenceReport r =
      equivalence(first, second, u, contents, parse_mode(cfg.mode), {cfg.threads});
  if (cfg.format == "json") {
    print_json(out, report::equivalence_json(r));
  } else {
    out << (r.equal() ? "EQUAL" : "DIFFERENT") << " (" << r.detected_first
        << " vs " << r.detected_second << " of " << r.total << " faults, mode "
        << coverage_mode_name(r.mode) << ")\n";
    for (const auto& f : r.only_first) out << "  only first:  " << format_fault(f) << '\n';
    for (const auto& f : r.only_second) out << "  only second: " << format_fault(f) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Transparent word-oriented march test toolkit", "twm"};
  app.require_subcommand(1);
  Config cfg;

  const std::vector<std::string> formats{"text", "json"};
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember(formats));
  };
  const auto add_memory = [&](CLI::App* sub, bool with_count) {
    sub->add_option("--width", cfg.widths, "Word width B")->required()
        ->expected(1)->check(CLI::Range(1u, kMaxSimWidth));
    sub->add_option("--words", cfg.words, "Word count N")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed for random contents");
    sub->add_option("--contents", cfg.contents,
                    "Initial contents: zero, random or a hex-lines file");
    if (with_count)
      sub->add_option("--count", cfg.count, "Random contents to try")
          ->check(CLI::PositiveNumber);
  };
  const std::vector<std::string> schemes{"twmta", "scheme1", "none",
                                         "transparent", "reference"};

  auto* parse = app.add_subcommand("parse", "Parse, validate and print a march test");
  parse->add_option("input", cfg.inputs, "Builtin name, inline text or file")
      ->required()->expected(1);
  add_common(parse);

  auto* transform = app.add_subcommand("transform", "Generate a transparent word test");
  transform->add_option("input", cfg.inputs)->required()->expected(1);
  transform->add_option("--width", cfg.widths, "Word width B")->expected(1)
      ->check(CLI::PositiveNumber);
  transform->add_option("--scheme", cfg.scheme, "twmta, scheme1 or none")
      ->check(CLI::IsMember({"twmta", "scheme1", "none"}));
  transform->add_flag("--trace", cfg.trace, "Emit the transformation trace as JSON");
  add_common(transform);

  auto* complexity = app.add_subcommand("complexity", "Tabulate test-time complexity");
  complexity->add_option("inputs", cfg.inputs, "Tests (default: all builtins)");
  complexity->add_option("--width", cfg.widths, "Word widths")->delimiter(',')
      ->check(CLI::PositiveNumber);
  complexity->add_flag("--exact", cfg.exact, "Add counts of the generated tests");
  add_common(complexity);

  auto* simulate = app.add_subcommand("simulate", "Run a test on the memory model");
  simulate->add_option("input", cfg.inputs)->required()->expected(1);
  add_memory(simulate, false);
  simulate->add_option("--scheme", cfg.scheme, "Transform before running")
      ->check(CLI::IsMember(schemes));
  simulate->add_option("--fault", cfg.fault_specs, "Fault to inject (repeatable)");
  simulate->add_flag("--signature", cfg.signature,
                     "Treat the input as a signature prediction test");
  add_common(simulate);

  auto* coverage = app.add_subcommand("coverage", "Exhaustive fault coverage");
  coverage->add_option("input", cfg.inputs)->required()->expected(1);
  add_memory(coverage, true);
  coverage->add_option("--scheme", cfg.scheme, "Transform before evaluating")
      ->check(CLI::IsMember(schemes));
  coverage->add_option("--faults", cfg.faults, "Fault kinds, e.g. saf,tf,cf or all");
  coverage->add_option("--mode", cfg.mode)->check(CLI::IsMember({"strict", "any"}));
  coverage->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  add_common(coverage);

  auto* equiv = app.add_subcommand(
      "equivalence",
      "Compare detected-fault sets; with one input, its generated transparent "
      "test against the nontransparent reference");
  equiv->add_option("inputs", cfg.inputs)->required()->expected(1, 2);
  add_memory(equiv, true);
  equiv->add_option("--scheme", cfg.scheme, "Transform the first input")
      ->check(CLI::IsMember(schemes));
  equiv->add_option("--faults", cfg.faults);
  equiv->add_option("--mode", cfg.mode)->check(CLI::IsMember({"strict", "any"}));
  equiv->add_option("--threads", cfg.threads);
  add_common(equiv);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(cfg, out, err);
    if (transform->parsed()) return cmd_transform(cfg, out);
    if (complexity->parsed()) return cmd_complexity(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (coverage->parsed()) return cmd_coverage(cfg, out);
    if (equiv->parsed()) return cmd_equivalence(cfg, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const EmptyMarchError&) {
    err << "Abort: empty march test\n";
    return kAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExecution;
  }
  return kUsage;
}

}  // namespace twm::cli
