// SPDX-License-Identifier: Apache-2.0

#include "twm/memsim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "twm/background.hpp"
#include "twm/kernels.hpp"

namespace twm {

namespace {

constexpr std::uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~0ull : (1ull << width) - 1;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Per-op resolved masks: value = (transparent ? snapshot : 0) ^ mask.
struct ResolvedOp {
  Action action;
  bool transparent;
  std::uint64_t mask;
};

std::vector<std::vector<ResolvedOp>> resolve_ops(const MarchTest& march,
                                                 unsigned width) {
  const unsigned max_k = ceil_log2(width);
  std::vector<std::uint64_t> patterns;
  for (unsigned k = 0; k <= max_k; ++k)
    patterns.push_back(background_pattern(k, width).low_word());

  std::vector<std::vector<ResolvedOp>> out;
  out.reserve(march.elements.size());
  for (const auto& e : march.elements) {
    auto& ops = out.emplace_back();
    for (const auto& op : e.ops) {
      if (op.data.background > max_k)
        throw ExecutionError("unresolved spec " + format_op(op) +
                             ": width " + std::to_string(width) +
                             " has backgrounds a_0..a_" +
                             std::to_string(max_k));
      std::uint64_t m = patterns[op.data.background];
      if (op.data.complemented) m ^= width_mask(width);
      ops.push_back({op.action, op.data.transparent(), m});
    }
  }
  return out;
}

std::string format_cell(const Cell& c) {
  return std::to_string(c.word) + "." + std::to_string(c.bit);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("bad " + std::string(what) + " '" +
                                std::string(text) + "'");
  return value;
}

Cell parse_cell(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos)
    throw std::invalid_argument("cell '" + std::string(text) +
                                "' must be word.bit");
  return {parse_number<std::size_t>(text.substr(0, dot), "word"),
          parse_number<unsigned>(text.substr(dot + 1), "bit")};
}

bool parse_bool(std::string_view text) {
  if (text == "0") return false;
  if (text == "1") return true;
  throw std::invalid_argument("expected 0 or 1, got '" + std::string(text) +
                              "'");
}

Transition parse_transition(std::string_view text) {
  if (text == "up") return Transition::Up;
  if (text == "down") return Transition::Down;
  throw std::invalid_argument("expected up or down, got '" +
                              std::string(text) + "'");
}

std::string_view transition_name(Transition t) {
  return t == Transition::Up ? "up" : "down";
}

}  // namespace

std::string_view fault_kind_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::Saf0:
      return "SAF0";
    case FaultKind::Saf1:
      return "SAF1";
    case FaultKind::TfUp:
      return "TF_UP";
    case FaultKind::TfDown:
      return "TF_DOWN";
    case FaultKind::CfSt:
      return "CFST";
    case FaultKind::CfId:
      return "CFID";
    case FaultKind::CfIn:
      return "CFIN";
  }
  return "?";
}

bool is_coupling(FaultKind kind) {
  return kind == FaultKind::CfSt || kind == FaultKind::CfId ||
         kind == FaultKind::CfIn;
}

FaultDescriptor FaultDescriptor::saf(Cell c, bool value) {
  FaultDescriptor f;
  f.kind = value ? FaultKind::Saf1 : FaultKind::Saf0;
  f.victim = c;
  f.forced_value = value;
  return f;
}

FaultDescriptor FaultDescriptor::tf(Cell c, Transition blocked) {
  FaultDescriptor f;
  f.kind = blocked == Transition::Up ? FaultKind::TfUp : FaultKind::TfDown;
  f.victim = c;
  f.trigger = blocked;
  return f;
}

FaultDescriptor FaultDescriptor::cfst(Cell victim, Cell aggressor,
                                      bool aggressor_state, bool forced) {
  FaultDescriptor f;
  f.kind = FaultKind::CfSt;
  f.victim = victim;
  f.aggressor = aggressor;
  f.aggressor_state = aggressor_state;
  f.forced_value = forced;
  return f;
}

FaultDescriptor FaultDescriptor::cfid(Cell victim, Cell aggressor,
                                      Transition trigger, bool forced) {
  FaultDescriptor f;
  f.kind = FaultKind::CfId;
  f.victim = victim;
  f.aggressor = aggressor;
  f.trigger = trigger;
  f.forced_value = forced;
  return f;
}

FaultDescriptor FaultDescriptor::cfin(Cell victim, Cell aggressor,
                                      Transition trigger) {
  FaultDescriptor f;
  f.kind = FaultKind::CfIn;
  f.victim = victim;
  f.aggressor = aggressor;
  f.trigger = trigger;
  return f;
}

std::string format_fault(const FaultDescriptor& f) {
  switch (f.kind) {
    case FaultKind::Saf0:
      return "saf0:" + format_cell(f.victim);
    case FaultKind::Saf1:
      return "saf1:" + format_cell(f.victim);
    case FaultKind::TfUp:
      return "tfup:" + format_cell(f.victim);
    case FaultKind::TfDown:
      return "tfdown:" + format_cell(f.victim);
    case FaultKind::CfSt:
      return "cfst:" + format_cell(f.victim) + ":" +
             format_cell(*f.aggressor) + ":" +
             (f.aggressor_state ? "1" : "0") + ":" +
             (f.forced_value ? "1" : "0");
    case FaultKind::CfId:
      return "cfid:" + format_cell(f.victim) + ":" +
             format_cell(*f.aggressor) + ":" +
             std::string(transition_name(f.trigger)) + ":" +
             (f.forced_value ? "1" : "0");
    case FaultKind::CfIn:
      return "cfin:" + format_cell(f.victim) + ":" +
             format_cell(*f.aggressor) + ":" +
             std::string(transition_name(f.trigger));
  }
  return {};
}

FaultDescriptor parse_fault(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const std::string_view kind = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n)
      throw std::invalid_argument("fault '" + std::string(text) + "': " +
                                  std::string(kind) + " takes " +
                                  std::to_string(n - 1) + " fields");
  };
  if (kind == "saf0" || kind == "saf1") {
    need(2);
    return FaultDescriptor::saf(parse_cell(parts[1]), kind == "saf1");
  }
  if (kind == "tfup" || kind == "tfdown") {
    need(2);
    return FaultDescriptor::tf(parse_cell(parts[1]), kind == "tfup"
                                                         ? Transition::Up
                                                         : Transition::Down);
  }
  if (kind == "cfst") {
    need(5);
    return FaultDescriptor::cfst(parse_cell(parts[1]), parse_cell(parts[2]),
                                 parse_bool(parts[3]), parse_bool(parts[4]));
  }
  if (kind == "cfid") {
    need(5);
    return FaultDescriptor::cfid(parse_cell(parts[1]), parse_cell(parts[2]),
                                 parse_transition(parts[3]),
                                 parse_bool(parts[4]));
  }
  if (kind == "cfin") {
    need(4);
    return FaultDescriptor::cfin(parse_cell(parts[1]), parse_cell(parts[2]),
                                 parse_transition(parts[3]));
  }
  throw std::invalid_argument("unknown fault kind '" + std::string(kind) +
                              "'");
}

Xorshift64Star::Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;
}

std::uint64_t Xorshift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1Dull;
}

MemoryImage::MemoryImage(std::size_t words, unsigned width,
                         std::vector<std::uint64_t> contents)
    : width_(width), mask_(width_mask(width)), cells_(std::move(contents)) {
  if (words == 0) throw ExecutionError("memory needs at least one word");
  if (width == 0 || width > kMaxSimWidth)
    throw ExecutionError("word width must be in [1, " +
                         std::to_string(kMaxSimWidth) + "], got " +
                         std::to_string(width));
  if (cells_.size() != words)
    throw ExecutionError("expected " + std::to_string(words) +
                         " initial words, got " +
                         std::to_string(cells_.size()));
  for (std::size_t a = 0; a < words; ++a)
    if (cells_[a] & ~mask_)
      throw ExecutionError("initial word " + std::to_string(a) +
                           " does not fit in " + std::to_string(width) +
                           " bits");
  snapshot_ = cells_;
}

MemoryImage MemoryImage::zero(std::size_t words, unsigned width) {
  return MemoryImage(words, width, std::vector<std::uint64_t>(words, 0));
}

MemoryImage MemoryImage::random(std::size_t words, unsigned width,
                                std::uint64_t seed) {
  return MemoryImage(words, width,
                     std::move(random_contents(words, width, 1, seed)[0]));
}

void MemoryImage::check_cell(const Cell& c) const {
  if (c.word >= cells_.size() || c.bit >= width_)
    throw ExecutionError("cell " + format_cell(c) + " outside a " +
                         std::to_string(cells_.size()) + "x" +
                         std::to_string(width_) + " memory");
}

bool MemoryImage::get_bit(const Cell& c) const {
  return (cells_[c.word] >> c.bit) & 1u;
}

void MemoryImage::set_bit(const Cell& c, bool value) {
  const std::uint64_t b = 1ull << c.bit;
  cells_[c.word] = value ? (cells_[c.word] | b) : (cells_[c.word] & ~b);
}

void MemoryImage::inject(const FaultDescriptor& fault) {
  check_cell(fault.victim);
  if (is_coupling(fault.kind)) {
    if (!fault.aggressor)
      throw ExecutionError("coupling fault needs an aggressor cell");
    check_cell(*fault.aggressor);
    if (*fault.aggressor == fault.victim)
      throw ExecutionError("aggressor and victim must differ");
  } else if (fault.aggressor) {
    throw ExecutionError("single-cell fault must not have an aggressor");
  }
  if (std::find(faults_.begin(), faults_.end(), fault) != faults_.end())
    return;
  faults_.push_back(fault);
  settle();
}

void MemoryImage::write(std::size_t address, std::uint64_t value) {
  const std::uint64_t old = cells_[address];
  std::uint64_t next = value & mask_;
  for (const auto& f : faults_) {
    if (f.victim.word != address) continue;
    const std::uint64_t b = 1ull << f.victim.bit;
    switch (f.kind) {
      case FaultKind::Saf0:
        next &= ~b;
        break;
      case FaultKind::Saf1:
        next |= b;
        break;
      case FaultKind::TfUp:
        if (!(old & b) && (next & b)) next &= ~b;
        break;
      case FaultKind::TfDown:
        if ((old & b) && !(next & b)) next |= b;
        break;
      default:
        break;
    }
  }
  cells_[address] = next;

  const std::uint64_t changed = old ^ next;
  if (changed) {
    for (const auto& f : faults_) {
      if (f.kind != FaultKind::CfId && f.kind != FaultKind::CfIn) continue;
      if (f.aggressor->word != address) continue;
      const std::uint64_t b = 1ull << f.aggressor->bit;
      if (!(changed & b)) continue;
      const Transition t = (next & b) ? Transition::Up : Transition::Down;
      if (t != f.trigger) continue;
      set_bit(f.victim,
              f.kind == FaultKind::CfId ? f.forced_value : !get_bit(f.victim));
    }
  }
  settle();
}

void MemoryImage::settle() {
  for (const auto& f : faults_)
    if (f.kind == FaultKind::CfSt && get_bit(*f.aggressor) == f.aggressor_state)
      set_bit(f.victim, f.forced_value);
  for (const auto& f : faults_)
    if (f.kind == FaultKind::Saf0 || f.kind == FaultKind::Saf1)
      set_bit(f.victim, f.kind == FaultKind::Saf1);
}

MemoryImage new_memory(std::size_t words, unsigned width,
                       std::vector<std::uint64_t> contents) {
  return MemoryImage(words, width, std::move(contents));
}

MemoryImage inject(MemoryImage mem, const FaultDescriptor& fault) {
  mem.inject(fault);
  return mem;
}

std::vector<std::vector<std::uint64_t>> random_contents(std::size_t words,
                                                        unsigned width,
                                                        std::size_t count,
                                                        std::uint64_t seed) {
  Xorshift64Star rng(seed);
  const std::uint64_t m = width_mask(width);
  std::vector<std::vector<std::uint64_t>> out(count);
  for (auto& image : out) {
    image.resize(words);
    for (auto& w : image) w = rng.next() & m;
  }
  return out;
}

std::vector<std::uint64_t> parse_hex_lines(std::string_view text,
                                           unsigned width) {
  std::vector<std::uint64_t> words;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
      line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.remove_suffix(1);
    if (line.starts_with("0x") || line.starts_with("0X")) line.remove_prefix(2);
    if (line.empty()) continue;
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + line.size(), value, 16);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw ExecutionError("line " + std::to_string(line_no) +
                           ": not a hex word '" + std::string(line) + "'");
    if (value & ~width_mask(width))
      throw ExecutionError("line " + std::to_string(line_no) +
                           ": word exceeds " + std::to_string(width) +
                           " bits");
    words.push_back(value);
  }
  return words;
}

std::string format_hex_lines(std::span<const std::uint64_t> words,
                             unsigned width) {
  const unsigned digits = (width + 3) / 4;
  std::string out;
  for (auto w : words) {
    char buf[17];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w, 16);
    std::string hex(buf, ptr);
    if (hex.size() < digits) hex.insert(0, digits - hex.size(), '0');
    out += hex;
    out += '\n';
  }
  return out;
}

std::string format_word(std::uint64_t word, unsigned width) {
  std::string s;
  for (unsigned j = width; j-- > 0;) s.push_back(((word >> j) & 1u) ? '1' : '0');
  return s;
}

std::uint64_t resolve(const DataSpec& spec, std::uint64_t initial,
                      unsigned width) {
  if (width == 0 || width > kMaxSimWidth)
    throw ExecutionError("word width must be in [1, 64]");
  if (spec.background > ceil_log2(width))
    throw ExecutionError("unresolved spec " + format_data(spec) + " at width " +
                         std::to_string(width));
  std::uint64_t v = background_pattern(spec.background, width).low_word();
  if (spec.complemented) v ^= width_mask(width);
  if (spec.transparent()) v ^= initial;
  return v;
}

TestOutcome run(const MarchTest& march, MemoryImage mem,
                const RunOptions& options) {
  const auto resolved = resolve_ops(march, mem.width());
  const std::size_t n = mem.words();
  mem.capture_snapshot();
  const auto snapshot = mem.snapshot();

  TestOutcome out;
  out.initial_snapshot.assign(snapshot.begin(), snapshot.end());

  std::size_t op_base = 0;
  bool stop = false;
  for (std::size_t e = 0; e < march.elements.size() && !stop; ++e) {
    AddressOrder order = march.elements[e].order;
    if (order == AddressOrder::Any) order = options.any_order;
    const bool down = order == AddressOrder::Descending;
    const auto& ops = resolved[e];
    for (std::size_t step = 0; step < n && !stop; ++step) {
      const std::size_t addr = down ? n - 1 - step : step;
      for (std::size_t o = 0; o < ops.size(); ++o) {
        const ResolvedOp& op = ops[o];
        const std::uint64_t value =
            (op.transparent ? snapshot[addr] : 0) ^ op.mask;
        if (op.action == Action::Write) {
          mem.write(addr, value);
          continue;
        }
        const std::uint64_t observed = mem.read(addr);
        const ReadRecord rec{op_base + o, e, addr, observed, value};
        if (observed != value) {
          if (!out.first_mismatch) out.first_mismatch = out.read_count;
          ++out.mismatch_count;
          if (options.record_reads) out.mismatches.push_back(rec);
          if (options.stop_at_first_mismatch) stop = true;
        }
        if (options.record_reads) out.reads.push_back(rec);
        ++out.read_count;
        if (stop) break;
      }
    }
    op_base += ops.size();
  }

  out.final_content.assign(mem.cells().begin(), mem.cells().end());
  out.transparent = out.final_content == out.initial_snapshot;
  out.detected = out.mismatch_count > 0;
  return out;
}

BulkOutcome run_fault_free(const MarchTest& march, MemoryImage mem) {
  if (!mem.faults().empty())
    throw ExecutionError("run_fault_free: memory has injected faults");
  const auto resolved = resolve_ops(march, mem.width());
  mem.capture_snapshot();

  const std::size_t n = mem.words();
  const auto snapshot = mem.snapshot();
  const std::vector<std::uint64_t> zeros(n, 0);
  std::vector<std::uint64_t> cells(snapshot.begin(), snapshot.end());
  std::vector<std::uint64_t> expected(n);

  BulkOutcome out;
  for (const auto& ops : resolved) {
    for (const ResolvedOp& op : ops) {
      const std::span<const std::uint64_t> base =
          op.transparent ? snapshot : std::span<const std::uint64_t>(zeros);
      if (op.action == Action::Write) {
        kernels::xor_broadcast(base, op.mask, cells);
      } else {
        kernels::xor_broadcast(base, op.mask, expected);
        out.mismatch_count += kernels::count_mismatch(cells, expected);
        out.read_count += n;
      }
    }
  }
  out.transparent = kernels::first_mismatch(cells, snapshot) == kernels::npos;
  out.final_content = std::move(cells);
  return out;
}

std::uint64_t compact(std::span<const std::uint64_t> stream, unsigned width,
                      const MisrPolynomial& polynomial, std::uint64_t seed) {
  if (polynomial.degree == 0 || polynomial.degree > 63)
    throw std::invalid_argument("MISR degree must be in [1, 63]");
  const std::uint64_t m = polynomial.mask();
  const unsigned chunks = (width + polynomial.degree - 1) / polynomial.degree;
  std::uint64_t state = seed & m;
  for (std::uint64_t word : stream) {
    for (unsigned c = 0; c < chunks; ++c) {
      const std::uint64_t chunk = (word >> (c * polynomial.degree)) & m;
      const bool lsb = state & 1u;
      state >>= 1;
      if (lsb) state ^= polynomial.taps;
      state ^= chunk;
    }
  }
  return state;
}

Signature predict_signature(const MarchTest& read_only, const MemoryImage& mem,
                            const MisrPolynomial& polynomial,
                            std::uint64_t seed) {
  for (const auto& e : read_only.elements)
    for (const auto& op : e.ops)
      if (op.is_write())
        throw ExecutionError("signature prediction test contains a write (" +
                             format_op(op) + ")");
  if (!mem.faults().empty())
    throw ExecutionError("signature prediction needs a fault-free memory");

  const TestOutcome outcome = run(read_only, mem);
  Signature sig;
  sig.polynomial = polynomial;
  sig.seed = seed;
  sig.width = mem.width();
  sig.stream.reserve(outcome.reads.size());
  for (const auto& r : outcome.reads) sig.stream.push_back(r.expected);
  sig.compacted = compact(sig.stream, sig.width, polynomial, seed);
  return sig;
}

Signature observed_signature(const TestOutcome& outcome, unsigned width,
                             const MisrPolynomial& polynomial,
                             std::uint64_t seed) {
  if (outcome.reads.size() != outcome.read_count)
    throw std::invalid_argument("observed_signature needs a recorded read stream");
  Signature sig;
  sig.polynomial = polynomial;
  sig.seed = seed;
  sig.width = width;
  sig.stream.reserve(outcome.reads.size());
  for (const auto& r : outcome.reads) sig.stream.push_back(r.observed);
  sig.compacted = compact(sig.stream, width, polynomial, seed);
  return sig;
}

SignatureVerdict compare_signature(const Signature& expected,
                                   const Signature& observed) {
  if (expected.polynomial != observed.polynomial || expected.seed != observed.seed)
    throw std::invalid_argument("signatures use different polynomials or seeds");

  SignatureVerdict v;
  const bool compacted_equal = expected.compacted == observed.compacted;
  if (expected.stream.empty() && observed.stream.empty()) {
    v.pass = compacted_equal;
    return v;
  }
  const auto& a = expected.stream;
  const auto& b = observed.stream;
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  if (ia == a.end() && ib == b.end()) {
    v.pass = true;
    return v;
  }
  v.divergence = static_cast<std::size_t>(ia - a.begin());
  v.aliased = compacted_equal;
  return v;
}

}  // namespace twm
