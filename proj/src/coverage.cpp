// SPDX-License-Identifier: Apache-2.0

#include "twm/coverage.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace twm {

namespace {

void add_kind(std::vector<FaultKind>& out, FaultKind k) {
  if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
}

std::vector<Cell> all_cells(std::size_t words, unsigned width) {
  std::vector<Cell> cells;
  cells.reserve(words * width);
  for (std::size_t w = 0; w < words; ++w)
    for (unsigned b = 0; b < width; ++b) cells.push_back({w, b});
  return cells;
}

}  // namespace

std::vector<FaultKind> parse_fault_kinds(std::string_view text) {
  std::vector<FaultKind> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string token(text.substr(start, comma - start));
    start = comma + 1;
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
    if (token.empty() || token == "none") continue;
    if (token == "all") {
      for (auto k : kAllFaultKinds) add_kind(out, k);
    } else if (token == "saf") {
      add_kind(out, FaultKind::Saf0);
      add_kind(out, FaultKind::Saf1);
    } else if (token == "tf") {
      add_kind(out, FaultKind::TfUp);
      add_kind(out, FaultKind::TfDown);
    } else if (token == "cf") {
      add_kind(out, FaultKind::CfSt);
      add_kind(out, FaultKind::CfId);
      add_kind(out, FaultKind::CfIn);
    } else if (token == "saf0") {
      add_kind(out, FaultKind::Saf0);
    } else if (token == "saf1") {
      add_kind(out, FaultKind::Saf1);
    } else if (token == "tfup") {
      add_kind(out, FaultKind::TfUp);
    } else if (token == "tfdown") {
      add_kind(out, FaultKind::TfDown);
    } else if (token == "cfst") {
      add_kind(out, FaultKind::CfSt);
    } else if (token == "cfid") {
      add_kind(out, FaultKind::CfId);
    } else if (token == "cfin") {
      add_kind(out, FaultKind::CfIn);
    } else {
      throw std::invalid_argument("unknown fault kind '" + token + "'");
    }
  }
  return out;
}

std::size_t FaultUniverse::count(FaultKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(faults.begin(), faults.end(),
                    [kind](const FaultDescriptor& f) { return f.kind == kind; }));
}

std::size_t FaultUniverse::intra_word_count() const {
  return static_cast<std::size_t>(std::count_if(
      faults.begin(), faults.end(),
      [](const FaultDescriptor& f) { return f.aggressor && f.intra_word(); }));
}

std::size_t FaultUniverse::inter_word_count() const {
  return static_cast<std::size_t>(std::count_if(
      faults.begin(), faults.end(),
      [](const FaultDescriptor& f) { return f.aggressor && !f.intra_word(); }));
}

FaultUniverse enumerate_faults(std::size_t words, unsigned width,
                               std::span<const FaultKind> kinds) {
  if (words == 0 || width == 0)
    throw std::invalid_argument("fault universe needs N, B >= 1");
  FaultUniverse u;
  u.words = words;
  u.width = width;
  for (auto k : kinds) add_kind(u.kinds, k);
  std::sort(u.kinds.begin(), u.kinds.end());

  const auto cells = all_cells(words, width);
  constexpr std::array<Transition, 2> dirs{Transition::Up, Transition::Down};
  for (FaultKind kind : u.kinds) {
    if (!is_coupling(kind)) {
      for (const Cell& c : cells) {
        switch (kind) {
          case FaultKind::Saf0:
            u.faults.push_back(FaultDescriptor::saf(c, false));
            break;
          case FaultKind::Saf1:
            u.faults.push_back(FaultDescriptor::saf(c, true));
            break;
          case FaultKind::TfUp:
            u.faults.push_back(FaultDescriptor::tf(c, Transition::Up));
            break;
          default:
            u.faults.push_back(FaultDescriptor::tf(c, Transition::Down));
            break;
        }
      }
      continue;
    }
    for (const Cell& victim : cells) {
      for (const Cell& aggressor : cells) {
        if (victim == aggressor) continue;
        switch (kind) {
          case FaultKind::CfSt:
            for (bool state : {false, true})
              for (bool forced : {false, true})
                u.faults.push_back(
                    FaultDescriptor::cfst(victim, aggressor, state, forced));
            break;
          case FaultKind::CfId:
            for (Transition t : dirs)
              for (bool forced : {false, true})
                u.faults.push_back(
                    FaultDescriptor::cfid(victim, aggressor, t, forced));
            break;
          default:
            for (Transition t : dirs)
              u.faults.push_back(FaultDescriptor::cfin(victim, aggressor, t));
            break;
        }
      }
    }
  }
  return u;
}

std::string_view coverage_mode_name(CoverageMode mode) {
  return mode == CoverageMode::Strict ? "strict" : "any";
}

bool FaultVerdict::strict() const {
  return !per_content.empty() &&
         std::all_of(per_content.begin(), per_content.end(),
                     [](bool d) { return d; });
}

bool FaultVerdict::any() const {
  return std::any_of(per_content.begin(), per_content.end(),
                     [](bool d) { return d; });
}

double KindAggregate::percent(CoverageMode mode) const {
  if (total == 0) return 100.0;
  const std::size_t hit =
      mode == CoverageMode::Strict ? strict_detected : any_detected;
  return 100.0 * static_cast<double>(hit) / static_cast<double>(total);
}

std::size_t CoverageReport::detected(CoverageMode mode) const {
  return static_cast<std::size_t>(
      std::count_if(per_fault.begin(), per_fault.end(),
                    [mode](const FaultVerdict& v) { return v.detected(mode); }));
}

double CoverageReport::percent(CoverageMode mode) const {
  if (per_fault.empty()) return 100.0;
  return 100.0 * static_cast<double>(detected(mode)) /
         static_cast<double>(per_fault.size());
}

std::set<FaultDescriptor> CoverageReport::detected_set(CoverageMode mode) const {
  std::set<FaultDescriptor> out;
  for (const auto& v : per_fault)
    if (v.detected(mode)) out.insert(v.fault);
  return out;
}

CoverageReport evaluate(const MarchTest& march, const FaultUniverse& universe,
                        std::span<const std::vector<std::uint64_t>> contents,
                        const EvaluateOptions& options) {
  CoverageReport report;
  report.words = universe.words;
  report.width = universe.width;
  report.contents_tried = contents.size();
  report.per_fault.resize(universe.faults.size());

  // Check dimensions and specs once up front; errors surface here rather
  // than from a worker thread.
  std::vector<MemoryImage> bases;
  bases.reserve(contents.size());
  for (const auto& c : contents)
    bases.emplace_back(universe.words, universe.width, c);
  if (!bases.empty()) (void)run_fault_free(march, bases.front());

  const RunOptions run_options{AddressOrder::Ascending, false, true};
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      FaultVerdict& v = report.per_fault[i];
      v.fault = universe.faults[i];
      v.per_content.resize(bases.size());
      for (std::size_t c = 0; c < bases.size(); ++c) {
        MemoryImage mem = bases[c];
        mem.inject(v.fault);
        const TestOutcome out = run(march, std::move(mem), run_options);
        v.per_content[c] = out.detected;
        if (out.first_mismatch &&
            (!v.first_detecting_read ||
             *out.first_mismatch < *v.first_detecting_read))
          v.first_detecting_read = out.first_mismatch;
      }
    }
  };

  unsigned threads = options.threads == 0
                         ? std::max(1u, std::thread::hardware_concurrency())
                         : options.threads;
  const std::size_t n = universe.faults.size();
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(n, t * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }

  for (FaultKind kind : universe.kinds) {
    KindAggregate agg;
    agg.kind = kind;
    for (const auto& v : report.per_fault) {
      if (v.fault.kind != kind) continue;
      ++agg.total;
      const bool strict = v.strict();
      agg.strict_detected += strict;
      agg.any_detected += v.any();
      if (v.fault.aggressor) {
        if (v.fault.intra_word()) {
          ++agg.intra_total;
          agg.intra_strict += strict;
        } else {
          ++agg.inter_total;
          agg.inter_strict += strict;
        }
      }
    }
    report.aggregates.push_back(agg);
  }
  return report;
}

EquivalenceReport compare_coverage(const CoverageReport& first,
                                   const CoverageReport& second,
                                   CoverageMode mode) {
  EquivalenceReport r;
  r.mode = mode;
  r.total = first.per_fault.size();
  const auto a = first.detected_set(mode);
  const auto b = second.detected_set(mode);
  r.detected_first = a.size();
  r.detected_second = b.size();
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(r.only_first));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                      std::back_inserter(r.only_second));
  return r;
}

EquivalenceReport equivalence(const MarchTest& first, const MarchTest& second,
                              const FaultUniverse& universe,
                              std::span<const std::vector<std::uint64_t>> contents,
                              CoverageMode mode,
                              const EvaluateOptions& options) {
  return compare_coverage(evaluate(first, universe, contents, options),
                          evaluate(second, universe, contents, options), mode);
}

std::string_view state_condition_label(StateCondition c) {
  switch (c) {
    case StateCondition::AwayWithRef:
      return "(d_i->~d_i; d_j)";
    case StateCondition::AwayWithInv:
      return "(d_i->~d_i; ~d_j)";
    case StateCondition::BackWithRef:
      return "(~d_i->d_i; d_j)";
    case StateCondition::BackWithInv:
      return "(~d_i->d_i; ~d_j)";
  }
  return "?";
}

bool StateConditionReport::is_covered(unsigned i, unsigned j,
                                      StateCondition c) const {
  return covered[(static_cast<std::size_t>(i) * width + j) * 4 +
                 static_cast<std::size_t>(c)];
}

bool StateConditionReport::all_covered() const { return uncovered().empty(); }

std::vector<std::tuple<unsigned, unsigned, StateCondition>>
StateConditionReport::uncovered() const {
  std::vector<std::tuple<unsigned, unsigned, StateCondition>> out;
  for (unsigned i = 0; i < width; ++i)
    for (unsigned j = 0; j < width; ++j) {
      if (i == j) continue;
      for (auto c : kAllStateConditions)
        if (!is_covered(i, j, c)) out.emplace_back(i, j, c);
    }
  return out;
}

StateConditionReport check_state_conditions(const MarchTest& march,
                                            unsigned width) {
  if (width == 0 || width > kMaxSimWidth)
    throw ExecutionError("word width must be in [1, 64]");
  StateConditionReport report;
  report.width = width;
  report.covered.assign(static_cast<std::size_t>(width) * width * 4, false);

  constexpr int kNone = -1;
  std::vector<int> pending(static_cast<std::size_t>(width) * width, kNone);
  std::uint64_t word = 0;
  for (const auto& e : march.elements) {
    for (const auto& op : e.ops) {
      const std::uint64_t value = resolve(op.data, 0, width);
      if (op.is_read()) {
        for (std::size_t p = 0; p < pending.size(); ++p)
          if (pending[p] != kNone) report.covered[p * 4 + pending[p]] = true;
        continue;
      }
      const std::uint64_t changed = word ^ value;
      for (unsigned i = 0; i < width; ++i) {
        const bool i_changed = (changed >> i) & 1u;
        for (unsigned j = 0; j < width; ++j) {
          if (i == j) continue;
          int& slot = pending[static_cast<std::size_t>(i) * width + j];
          if (i_changed) {
            const bool back = (word >> i) & 1u;  // leaving ~d_i
            const bool j_inv = (value >> j) & 1u;
            slot = static_cast<int>(back ? (j_inv ? StateCondition::BackWithInv
                                                  : StateCondition::BackWithRef)
                                         : (j_inv ? StateCondition::AwayWithInv
                                                  : StateCondition::AwayWithRef));
          } else if ((changed >> j) & 1u) {
            slot = kNone;
          }
        }
      }
      word = value;
    }
  }
  return report;
}

std::set<std::pair<std::uint64_t, std::uint64_t>>
PairStateTrace::visited_states() const {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out{{0, 0}};
  for (const auto& e : entries) out.emplace(e.first, e.second);
  return out;
}

std::set<PairTransition> PairStateTrace::transitions() const {
  std::set<PairTransition> out;
  std::uint64_t a = 0, b = 0;
  for (const auto& e : entries) {
    const bool ca = e.first != a, cb = e.second != b;
    if (ca && !cb) out.insert({0, a, e.first, b});
    if (cb && !ca) out.insert({1, b, e.second, a});
    a = e.first;
    b = e.second;
  }
  return out;
}

PairStateTrace pair_state_trace(const MarchTest& march, std::size_t words,
                                unsigned width, const TracePair& pair,
                                std::span<const std::uint64_t> initial) {
  std::vector<std::uint64_t> contents(initial.begin(), initial.end());
  if (contents.empty()) contents.assign(words, 0);
  MemoryImage mem(words, width, std::move(contents));

  const Cell& p = pair.first;
  const Cell& q = pair.second;
  if (p.word >= words || q.word >= words ||
      (!pair.whole_words && (p.bit >= width || q.bit >= width)))
    throw ExecutionError("traced pair outside a " + std::to_string(words) +
                         "x" + std::to_string(width) + " memory");
  if (pair.whole_words ? p.word == q.word : p == q)
    throw ExecutionError("traced pair members must be distinct");

  const auto resolved_value = [&](const DataSpec& spec, std::size_t addr) {
    return resolve(spec, mem.snapshot()[addr], width);
  };
  const auto member = [&](const Cell& c) -> std::uint64_t {
    const std::uint64_t rel = mem.cells()[c.word] ^ mem.snapshot()[c.word];
    return pair.whole_words ? rel : (rel >> c.bit) & 1u;
  };

  PairStateTrace trace;
  trace.pair = pair;
  std::size_t op_base = 0;
  for (std::size_t e = 0; e < march.elements.size(); ++e) {
    const auto& el = march.elements[e];
    const bool down = el.order == AddressOrder::Descending;
    for (std::size_t step = 0; step < words; ++step) {
      const std::size_t addr = down ? words - 1 - step : step;
      if (addr != p.word && addr != q.word) continue;
      for (std::size_t o = 0; o < el.ops.size(); ++o) {
        const MarchOp& op = el.ops[o];
        if (op.is_write()) mem.write(addr, resolved_value(op.data, addr));
        trace.entries.push_back(
            {op_base + o, e, addr, op.action, member(p), member(q)});
      }
    }
    op_base += el.ops.size();
  }
  return trace;
}

}  // namespace twm
