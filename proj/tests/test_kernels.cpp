// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <string_view>

#include "twm/kernels.hpp"
#include "twm/memsim.hpp"
#include "twm/transform.hpp"

using namespace twm;
using namespace twm::kernels;

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(available(Isa::Scalar));
  EXPECT_EQ(available_isas().front(), Isa::Scalar);
  EXPECT_EQ(table(Isa::Scalar).isa, Isa::Scalar);
}

TEST(Kernels, ForcedScalarHonoured) {
  const char* forced = std::getenv("TWM_ISA");
  if (forced && std::string_view(forced) == "scalar")
    EXPECT_EQ(active().isa, Isa::Scalar);
  else
    EXPECT_EQ(active().isa, available_isas().back());
}

TEST(Kernels, UnavailableVariantThrows) {
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (!available(isa)) EXPECT_THROW(table(isa), std::invalid_argument);
}

// Every variant agrees with plain loops on all lengths around the vector
// widths, including tails and unaligned starts.
TEST(Kernels, VariantsMatchPlainLoops) {
  std::mt19937_64 rng(99);
  for (Isa isa : available_isas()) {
    const KernelTable& k = table(isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      for (std::size_t offset : {0u, 1u}) {
        std::vector<std::uint64_t> a(n + offset), b(n + offset), dst(n + offset);
        for (auto& x : a) x = rng();
        b = a;
        const std::size_t flips = n ? rng() % 4 : 0;
        for (std::size_t f = 0; f < flips; ++f) b[offset + rng() % n] ^= 1ull << (rng() % 64);
        const std::uint64_t mask = rng();

        k.xor_broadcast(a.data() + offset, mask, dst.data() + offset, n);
        for (std::size_t i = 0; i < n; ++i)
          ASSERT_EQ(dst[offset + i], a[offset + i] ^ mask) << isa_name(isa);

        std::size_t first = npos, count = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (a[offset + i] != b[offset + i]) {
            if (first == npos) first = i;
            ++count;
          }
        ASSERT_EQ(k.first_mismatch(a.data() + offset, b.data() + offset, n), first)
            << isa_name(isa) << " n=" << n;
        ASSERT_EQ(k.count_mismatch(a.data() + offset, b.data() + offset, n), count)
            << isa_name(isa) << " n=" << n;
      }
    }
  }
}

TEST(Kernels, SingleDifferenceAtEveryPosition) {
  for (Isa isa : available_isas()) {
    const KernelTable& k = table(isa);
    const std::size_t n = 37;
    std::vector<std::uint64_t> a(n, 0x1234), b(n, 0x1234);
    for (std::size_t i = 0; i < n; ++i) {
      b[i] ^= 1ull << 63;
      ASSERT_EQ(k.first_mismatch(a.data(), b.data(), n), i);
      ASSERT_EQ(k.count_mismatch(a.data(), b.data(), n), 1u);
      b[i] = a[i];
    }
  }
}

// The bulk executor built on the kernels agrees with the op-by-op executor.
TEST(Kernels, BulkExecutorMatchesReference) {
  std::mt19937_64 rng(4);
  const MarchTest c = parse_march(builtin_march_text("marchc-"));
  const MarchTest u = parse_march(builtin_march_text("marchu"));
  for (unsigned width : {1u, 4u, 8u, 33u, 64u}) {
    for (const MarchTest& t :
         {twm_ta(c, width).output, twm_ta(u, width).output,
          expand_word_oriented(c, width), nontransparent_reference(u, width),
          parse_march("{ ud:(w0); up:(r1) }")}) {
      for (std::size_t words : {1u, 5u, 64u}) {
        const MemoryImage mem = MemoryImage::random(words, width, rng());
        const TestOutcome ref = run(t, mem);
        const BulkOutcome bulk = run_fault_free(t, mem);
        ASSERT_EQ(bulk.read_count, ref.read_count);
        ASSERT_EQ(bulk.mismatch_count, ref.mismatch_count);
        ASSERT_EQ(bulk.final_content, ref.final_content);
        ASSERT_EQ(bulk.transparent, ref.transparent);
      }
    }
  }
}

TEST(Kernels, BulkExecutorRejectsFaults) {
  MemoryImage mem = MemoryImage::zero(4, 4);
  mem.inject(FaultDescriptor::saf({0, 0}, true));
  EXPECT_THROW(run_fault_free(parse_march("{ ud:(r0) }"), mem), ExecutionError);
}
