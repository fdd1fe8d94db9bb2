// SPDX-License-Identifier: Apache-2.0

#include <arm_neon.h>

#include "twm/kernels.hpp"

namespace twm::kernels::detail {

namespace {

constexpr std::size_t kLanes = 2;

void xor_broadcast_neon(const std::uint64_t* src, std::uint64_t mask,
                        std::uint64_t* dst, std::size_t n) {
  const uint64x2_t m = vdupq_n_u64(mask);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    vst1q_u64(dst + i, veorq_u64(vld1q_u64(src + i), m));
  for (; i < n; ++i) dst[i] = src[i] ^ mask;
}

// Lane k of the result is all-ones when lane k is equal.
inline uint64x2_t lane_eq(const std::uint64_t* a, const std::uint64_t* b) {
  return vceqq_u64(vld1q_u64(a), vld1q_u64(b));
}

std::size_t first_mismatch_neon(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const uint64x2_t eq = lane_eq(a + i, b + i);
    if (vgetq_lane_u64(eq, 0) == 0) return i;
    if (vgetq_lane_u64(eq, 1) == 0) return i + 1;
  }
  for (; i < n; ++i)
    if (a[i] != b[i]) return i;
  return npos;
}

std::size_t count_mismatch_neon(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
  uint64x2_t equal = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    equal = vsubq_u64(equal, lane_eq(a + i, b + i));  // -(-1) per equal lane
  std::size_t count =
      i - static_cast<std::size_t>(vgetq_lane_u64(equal, 0) +
                                   vgetq_lane_u64(equal, 1));
  for (; i < n; ++i) count += a[i] != b[i];
  return count;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Isa::Neon, xor_broadcast_neon, first_mismatch_neon,
                             count_mismatch_neon};
  return t;
}

}  // namespace twm::kernels::detail
