// SPDX-License-Identifier: Apache-2.0

#include "twm/kernels.hpp"

namespace twm::kernels::detail {

namespace {

void xor_broadcast_scalar(const std::uint64_t* src, std::uint64_t mask,
                          std::uint64_t* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] ^ mask;
}

std::size_t first_mismatch_scalar(const std::uint64_t* a,
                                  const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return i;
  return npos;
}

std::size_t count_mismatch_scalar(const std::uint64_t* a,
                                  const std::uint64_t* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += a[i] != b[i];
  return count;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::Scalar, xor_broadcast_scalar,
                             first_mismatch_scalar, count_mismatch_scalar};
  return t;
}

}  // namespace twm::kernels::detail
