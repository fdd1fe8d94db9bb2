// SPDX-License-Identifier: Apache-2.0
//
// Built with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "twm/kernels.hpp"

namespace twm::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

void xor_broadcast_avx2(const std::uint64_t* src, std::uint64_t mask,
                        std::uint64_t* dst, std::size_t n) {
  const __m256i m = _mm256_set1_epi64x(static_cast<long long>(mask));
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_xor_si256(v, m));
  }
  for (; i < n; ++i) dst[i] = src[i] ^ mask;
}

// Bit k of the result is set when lane k differs.
inline unsigned lane_diff_mask(const std::uint64_t* a, const std::uint64_t* b) {
  const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a));
  const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b));
  const __m256i eq = _mm256_cmpeq_epi64(va, vb);
  return ~static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(eq))) &
         0xFu;
}

std::size_t first_mismatch_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const unsigned diff = lane_diff_mask(a + i, b + i);
    if (diff) return i + static_cast<std::size_t>(std::countr_zero(diff));
  }
  for (; i < n; ++i)
    if (a[i] != b[i]) return i;
  return npos;
}

std::size_t count_mismatch_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    count += static_cast<std::size_t>(std::popcount(lane_diff_mask(a + i, b + i)));
  for (; i < n; ++i) count += a[i] != b[i];
  return count;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::Avx2, xor_broadcast_avx2, first_mismatch_avx2,
                             count_mismatch_avx2};
  return t;
}

}  // namespace twm::kernels::detail
