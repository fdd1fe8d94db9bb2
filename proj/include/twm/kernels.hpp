// SPDX-License-Identifier: Apache-2.0
//
// Word-array kernels behind the fault-free bulk executor. Each kernel has a
// scalar reference and, where the target supports it, an AVX2 or NEON
// variant. The variant is chosen once at startup from the CPU features;
// setting TWM_ISA=scalar in the environment forces the reference path.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace twm::kernels {

enum class Isa { Scalar, Avx2, Neon };

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct KernelTable {
  Isa isa;
  // dst[i] = src[i] ^ mask
  void (*xor_broadcast)(const std::uint64_t* src, std::uint64_t mask,
                        std::uint64_t* dst, std::size_t n);
  // smallest i with a[i] != b[i], or npos
  std::size_t (*first_mismatch)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n);
  // |{i : a[i] != b[i]}|
  std::size_t (*count_mismatch)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n);
};

std::string_view isa_name(Isa isa);

/// Compiled in and supported by this CPU.
bool available(Isa isa);
std::vector<Isa> available_isas();

/// Table for a specific variant. Precondition: available(isa).
const KernelTable& table(Isa isa);

/// The dispatched table.
const KernelTable& active();

inline void xor_broadcast(std::span<const std::uint64_t> src,
                          std::uint64_t mask, std::span<std::uint64_t> dst) {
  active().xor_broadcast(src.data(), mask, dst.data(), dst.size());
}

inline std::size_t first_mismatch(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b) {
  return active().first_mismatch(a.data(), b.data(), a.size());
}

inline std::size_t count_mismatch(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b) {
  return active().count_mismatch(a.data(), b.data(), a.size());
}

namespace detail {
const KernelTable& scalar_table();
#if defined(TWM_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(TWM_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace twm::kernels
