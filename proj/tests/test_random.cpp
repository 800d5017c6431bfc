#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "qfbsde/random.hpp"

namespace qfbsde {
namespace {

using C = Philox4x32::Counter;
using K = Philox4x32::Key;

// Known-answer vectors published with the reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(OpenUniform, StaysInsideTheUnitInterval) {
  EXPECT_GT(open_uniform(0, 0), 0.0);
  EXPECT_LT(open_uniform(0xffffffff, 0xffffffff), 1.0);
  EXPECT_EQ(open_uniform(0xffffffff, 0xffffffff), 1.0 - 0x1.0p-53);
  EXPECT_EQ(open_uniform(0, 0), 0x1.0p-53);
  EXPECT_DOUBLE_EQ(open_uniform(0x80000000, 0), 0.5 + 0x1.0p-53);
}

TEST(NormalQuantile, Values) {
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(0.8413447460685429), 1.0, 1e-13);
  // Deep tail keeps relative accuracy.
  EXPECT_NEAR(normal_quantile(1e-300), -37.0470962993611992, 1e-12);
  for (double u : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_THROW(normal_quantile(u), std::domain_error);
  }
}

TEST(NormalStream, RandomAccessMatchesSequential) {
  NormalStream seq(42, 7, 3);
  const NormalStream ra(42, 7, 3);
  for (std::uint32_t j = 0; j < 101; ++j) EXPECT_EQ(seq.next(), ra.at(j)) << j;
}

TEST(NormalStream, IsAPureFunctionOfItsKeys) {
  NormalStream a(42, 5), b(42, 5);
  for (int j = 0; j < 20; ++j) EXPECT_EQ(a.next(), b.next());
  const NormalStream base(42, 5, 0);
  EXPECT_NE(base.at(0), NormalStream(43, 5, 0).at(0));
  EXPECT_NE(base.at(0), NormalStream(42, 6, 0).at(0));
  EXPECT_NE(base.at(0), NormalStream(42, 5, 1).at(0));
  EXPECT_NE(base.at(0), NormalStream(42ull << 32, 5, 0).at(0));
  EXPECT_NE(NormalStream(1, 1ull << 32).at(0), NormalStream(1, 0).at(0));
}

TEST(NormalStream, SampleMoments) {
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  const int n = 200000;
  for (int p = 0; p < n / 100; ++p) {
    NormalStream z(9, p);
    for (int j = 0; j < 100; ++j) {
      const double v = z.next();
      s1 += v;
      s2 += v * v;
      s4 += v * v * v * v;
    }
  }
  EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

}  // namespace
}  // namespace qfbsde
