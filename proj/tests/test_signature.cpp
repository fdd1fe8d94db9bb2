// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "twm/memsim.hpp"
#include "twm/transform.hpp"

using namespace twm;

TEST(Misr, ReferenceValues) {
  // Expected values from an independent bit-list model of the register.
  const std::vector<std::uint64_t> s4{0x1, 0x2, 0x3, 0xF};
  EXPECT_EQ(compact(s4, 4, {}, 0), 0x2d0eu);
  const std::vector<std::uint64_t> s64{0x0123456789ABCDEFull, ~0ull};
  EXPECT_EQ(compact(s64, 64, {}, 0), 0x5094u);
  const std::vector<std::uint64_t> s8{0xA5, 0x5A, 0xFF, 0x00, 0x3C};
  EXPECT_EQ(compact(s8, 8, {}, 0x1234), 0x6113u);
}

TEST(Misr, DefaultPolynomialIsMaximalLength) {
  const MisrPolynomial p = MisrPolynomial::default16();
  std::uint64_t state = 1;
  const std::vector<std::uint64_t> zero{0};
  std::uint64_t period = 0;
  do {
    state = compact(zero, 16, p, state);
    ++period;
  } while (state != 1 && period < 70000);
  EXPECT_EQ(period, 65535u);
}

TEST(Misr, RejectsBadDegree) {
  const std::vector<std::uint64_t> s{1};
  EXPECT_THROW(compact(s, 4, {0, 0}, 0), std::invalid_argument);
  EXPECT_THROW(compact(s, 4, {64, 1}, 0), std::invalid_argument);
}

TEST(Signature, PredictionMatchesFullRunStream) {
  const MarchTest u = parse_march(builtin_march_text("marchu"));
  for (unsigned width : {4u, 8u, 16u}) {
    const MarchTest full = twm_ta(u, width).output;
    const MarchTest sig = signature_prediction(full);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const MemoryImage mem = MemoryImage::random(8, width, seed);
      const Signature expected = predict_signature(sig, mem);
      const Signature observed = observed_signature(run(full, mem), width);
      ASSERT_EQ(expected.stream, observed.stream);
      ASSERT_EQ(expected.compacted, observed.compacted);
      EXPECT_TRUE(compare_signature(expected, observed).pass);
    }
  }
}

TEST(Signature, PredictionPreconditions) {
  const MemoryImage clean = MemoryImage::zero(4, 4);
  EXPECT_THROW(predict_signature(parse_march("{ ud:(rD,w~D) }"), clean),
               ExecutionError);
  MemoryImage faulty = clean;
  faulty.inject(FaultDescriptor::saf({0, 0}, true));
  EXPECT_THROW(predict_signature(parse_march("{ ud:(rD) }"), faulty),
               ExecutionError);
}

TEST(Signature, DetectedFaultChangesSignature) {
  const MarchTest full = twm_ta(parse_march(builtin_march_text("marchc-")), 4).output;
  const MemoryImage mem = MemoryImage::random(8, 4, 3);
  const Signature expected = predict_signature(signature_prediction(full), mem);
  MemoryImage faulty = mem;
  faulty.inject(FaultDescriptor::tf({5, 2}, Transition::Up));
  const TestOutcome o = run(full, faulty);
  ASSERT_TRUE(o.detected);
  const SignatureVerdict v = compare_signature(expected, observed_signature(o, 4));
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.divergence);
  EXPECT_EQ(*v.divergence, *o.first_mismatch);
  EXPECT_FALSE(v.aliased);
}

TEST(Signature, AliasingProbeCaughtAtStreamLevel) {
  // Degree-4 register x^4 + x^3 + 1 (Galois taps 0b1100). One shift of the
  // state 1 gives 0b1100, so {x, y} and {x ^ 1, y ^ 0b1100} end in the same
  // state.
  const MisrPolynomial p{4, 0xC};
  Signature expected, observed;
  expected.polynomial = observed.polynomial = p;
  expected.width = observed.width = 4;
  expected.stream = {0x5, 0x9};
  observed.stream = {0x5 ^ 0x1, 0x9 ^ 0xC};
  expected.compacted = compact(expected.stream, 4, p, 0);
  observed.compacted = compact(observed.stream, 4, p, 0);
  ASSERT_EQ(expected.compacted, observed.compacted);
  const SignatureVerdict v = compare_signature(expected, observed);
  EXPECT_FALSE(v.pass);
  EXPECT_TRUE(v.aliased);
  ASSERT_TRUE(v.divergence);
  EXPECT_EQ(*v.divergence, 0u);
}

TEST(Signature, CompactedOnlyComparison) {
  Signature a, b;
  a.compacted = b.compacted = 7;
  EXPECT_TRUE(compare_signature(a, b).pass);
  b.compacted = 8;
  EXPECT_FALSE(compare_signature(a, b).pass);
  b.seed = 1;
  EXPECT_THROW(compare_signature(a, b), std::invalid_argument);
}
