// SPDX-License-Identifier: Apache-2.0
//
// Word-oriented memory with single-cell and two-cell fault injection, a
// march executor and signature compaction.
//
// Transparent specs resolve against the snapshot captured when a run starts
// (absolute semantics): rD@k always expects snapshot ^ a_k, no matter what
// earlier operations wrote.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twm/march.hpp"

namespace twm {

inline constexpr unsigned kMaxSimWidth = 64;

struct Cell {
  std::size_t word = 0;
  unsigned bit = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class FaultKind { Saf0, Saf1, TfUp, TfDown, CfSt, CfId, CfIn };
enum class Transition { Up, Down };

std::string_view fault_kind_name(FaultKind kind);
bool is_coupling(FaultKind kind);

struct FaultDescriptor {
  FaultKind kind = FaultKind::Saf0;
  Cell victim;
  std::optional<Cell> aggressor;
  bool aggressor_state = false;  // CFst: aggressor value that triggers
  Transition trigger = Transition::Up;  // CFid, CFin
  bool forced_value = false;     // CFst, CFid

  bool intra_word() const {
    return aggressor && aggressor->word == victim.word;
  }

  static FaultDescriptor saf(Cell c, bool value);
  static FaultDescriptor tf(Cell c, Transition blocked);
  static FaultDescriptor cfst(Cell victim, Cell aggressor, bool aggressor_state,
                              bool forced);
  static FaultDescriptor cfid(Cell victim, Cell aggressor, Transition trigger,
                              bool forced);
  static FaultDescriptor cfin(Cell victim, Cell aggressor, Transition trigger);

  friend bool operator==(const FaultDescriptor&,
                         const FaultDescriptor&) = default;
  friend auto operator<=>(const FaultDescriptor&,
                          const FaultDescriptor&) = default;
};

/// Text form, e.g. "saf0:3.2", "tfup:1.2", "cfst:0.1:0.0:1:0",
/// "cfid:0.1:0.0:up:1", "cfin:0.1:2.3:down". Cells are word.bit; for coupling
/// faults the victim comes first.
std::string format_fault(const FaultDescriptor& fault);
FaultDescriptor parse_fault(std::string_view text);

/// Raised for inconsistent dimensions, coordinates or specs.
class ExecutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// xorshift64* with a splitmix64-expanded seed.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

class MemoryImage {
 public:
  MemoryImage(std::size_t words, unsigned width,
              std::vector<std::uint64_t> contents);

  static MemoryImage zero(std::size_t words, unsigned width);
  static MemoryImage random(std::size_t words, unsigned width,
                            std::uint64_t seed);

  std::size_t words() const { return cells_.size(); }
  unsigned width() const { return width_; }
  std::uint64_t mask() const { return mask_; }

  std::span<const std::uint64_t> cells() const { return cells_; }
  std::span<const std::uint64_t> snapshot() const { return snapshot_; }
  std::span<const FaultDescriptor> faults() const { return faults_; }

  /// Adds a fault (no-op if already present) and applies any effect it has
  /// on the stored state right away (stuck bits, state coupling).
  void inject(const FaultDescriptor& fault);

  std::uint64_t read(std::size_t address) const { return cells_[address]; }
  void write(std::size_t address, std::uint64_t value);

  /// Records the current cells as the reference for transparent specs.
  void capture_snapshot() { snapshot_ = cells_; }

 private:
  void check_cell(const Cell& c) const;
  void set_bit(const Cell& c, bool value);
  bool get_bit(const Cell& c) const;
  void settle();

  unsigned width_;
  std::uint64_t mask_;
  std::vector<std::uint64_t> cells_;
  std::vector<std::uint64_t> snapshot_;
  std::vector<FaultDescriptor> faults_;
};

MemoryImage new_memory(std::size_t words, unsigned width,
                       std::vector<std::uint64_t> contents);
MemoryImage inject(MemoryImage mem, const FaultDescriptor& fault);

/// Random contents for `count` images, drawn from one generator.
std::vector<std::vector<std::uint64_t>> random_contents(std::size_t words,
                                                        unsigned width,
                                                        std::size_t count,
                                                        std::uint64_t seed);

/// Hex lines, one word per line, most-significant digit first. Blank lines
/// and '#' comments are skipped.
std::vector<std::uint64_t> parse_hex_lines(std::string_view text,
                                           unsigned width);
std::string format_hex_lines(std::span<const std::uint64_t> words,
                             unsigned width);
std::string format_word(std::uint64_t word, unsigned width);  // binary, MSB first

/// Value a spec denotes for a word whose snapshot is `initial`.
/// Throws ExecutionError when the background index exceeds ceil(log2 width).
std::uint64_t resolve(const DataSpec& spec, std::uint64_t initial,
                      unsigned width);

struct RunOptions {
  AddressOrder any_order = AddressOrder::Ascending;
  bool record_reads = true;
  bool stop_at_first_mismatch = false;
};

struct ReadRecord {
  std::size_t op_index = 0;  // position of the op in the flattened test
  std::size_t element = 0;
  std::size_t address = 0;
  std::uint64_t observed = 0;
  std::uint64_t expected = 0;
  friend bool operator==(const ReadRecord&, const ReadRecord&) = default;
};

struct TestOutcome {
  std::vector<ReadRecord> reads;        // empty unless record_reads
  std::vector<ReadRecord> mismatches;   // empty unless record_reads
  std::size_t read_count = 0;
  std::size_t mismatch_count = 0;
  std::optional<std::size_t> first_mismatch;  // index into the read stream
  std::vector<std::uint64_t> initial_snapshot;
  std::vector<std::uint64_t> final_content;
  bool transparent = false;
  bool detected = false;

  friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

/// Executes a march test op by op, applying fault effects.
TestOutcome run(const MarchTest& march, MemoryImage mem,
                const RunOptions& options = {});

struct BulkOutcome {
  std::size_t read_count = 0;
  std::size_t mismatch_count = 0;
  std::vector<std::uint64_t> final_content;
  bool transparent = false;
};

/// Fault-free execution that sweeps each op across all words with the
/// vector kernels. Addresses are independent without faults, so the result
/// matches run() on the same memory. Throws ExecutionError if faults are
/// injected.
BulkOutcome run_fault_free(const MarchTest& march, MemoryImage mem);

struct MisrPolynomial {
  unsigned degree = 16;
  std::uint64_t taps = 0xB400;  // x^16 + x^14 + x^13 + x^11 + 1, Galois form

  static MisrPolynomial default16() { return {}; }
  std::uint64_t mask() const {
    return degree >= 64 ? ~0ull : (1ull << degree) - 1;
  }
  friend bool operator==(const MisrPolynomial&,
                         const MisrPolynomial&) = default;
};

struct Signature {
  std::vector<std::uint64_t> stream;
  std::uint64_t compacted = 0;
  MisrPolynomial polynomial;
  std::uint64_t seed = 0;
  unsigned width = 1;
};

/// Multiple-input signature register: each word is split into degree-bit
/// chunks (least significant first); per chunk the register shifts once and
/// the chunk is XORed in.
std::uint64_t compact(std::span<const std::uint64_t> stream, unsigned width,
                      const MisrPolynomial& polynomial, std::uint64_t seed);

/// Expected read stream of a read-only test over fault-free content.
/// Throws ExecutionError if the test writes or the memory has faults.
Signature predict_signature(const MarchTest& read_only, const MemoryImage& mem,
                            const MisrPolynomial& polynomial = {},
                            std::uint64_t seed = 0);

/// Signature of the values actually read during a run.
Signature observed_signature(const TestOutcome& outcome, unsigned width,
                             const MisrPolynomial& polynomial = {},
                             std::uint64_t seed = 0);

struct SignatureVerdict {
  bool pass = false;
  std::optional<std::size_t> divergence;  // first differing stream index
  bool aliased = false;  // compacted values agree although streams differ
};

/// Streams take precedence when both are retained. Throws
/// std::invalid_argument on polynomial or seed mismatch.
SignatureVerdict compare_signature(const Signature& expected,
                                   const Signature& observed);

}  // namespace twm
