#include <gtest/gtest.h>

#include "support.hpp"

using namespace cdgl;
using namespace testing_support;

TEST(FreeLie, EvenSquareVanishes) {
  FreeLie L({{"x", 2}}, 4);
  EXPECT_TRUE(L.bracket(L.gen(0), L.gen(0)).empty());
}

TEST(FreeLie, OddTripleBracketVanishes) {
  FreeLie L({{"x", 1}}, 4);
  Tensor x = L.gen(0);
  Tensor xx = L.bracket(x, x);
  EXPECT_FALSE(xx.empty());
  EXPECT_TRUE(L.bracket(x, xx).empty());
}

TEST(FreeLie, DegreeZeroBracketIsCommutator) {
  FreeLie L({{"u", 0}, {"v", 0}}, 3);
  Tensor uv = L.bracket(L.gen(0), L.gen(1));
  Tensor expected{{Word{'\0', '\1'}, 1}, {Word{'\1', '\0'}, -1}};
  EXPECT_EQ(uv, expected);
}

TEST(LieBasis, EvenGeneratorLengthTwoEmpty) {
  FreeLie L({{"x", 2}}, 4);
  EXPECT_TRUE(L.lie_basis(4, 2).empty());
}

TEST(LieBasis, OddGeneratorLengthTwo) {
  FreeLie L({{"x", 1}}, 4);
  auto b = L.lie_basis(2, 2);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(L.format(b[0]), "[x, x]");
}

TEST(LieBasis, TwoDegreeZeroGeneratorsDims) {
  FreeLie L({{"u", 0}, {"v", 0}}, 3);
  EXPECT_EQ(L.lie_basis(0, 1).size(), 2u);
  EXPECT_EQ(L.lie_basis(0, 2).size(), 1u);
  EXPECT_EQ(L.lie_basis(0, 3).size(), 2u);
  EXPECT_EQ(L.dim(0), 5);
}

TEST(LieBasis, WittNumbers) {
  for (int k = 1; k <= 3; ++k) {
    std::vector<Generator> g;
    for (int i = 0; i < k; ++i) g.push_back({"g" + std::to_string(i), 0});
    FreeLie L(g, 6);
    for (int n = 1; n <= (k == 3 ? 5 : 6); ++n)
      EXPECT_EQ(static_cast<int>(L.lie_basis(0, n).size()), witt(k, n)) << k << " " << n;
  }
}

TEST(Coordinates, Examples) {
  FreeLie L({{"u", 0}, {"v", 0}}, 3);
  Tensor u = L.gen(0), v = L.gen(1);
  EXPECT_TRUE(L.coordinates(Tensor{}, 0).empty());
  FreeLie L2({{"u", 0}, {"v", 0}}, 2);
  auto c = L2.coordinates(L2.bracket(L2.gen(0), L2.gen(1)), 0);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.begin()->second, 1);
  Tensor e = L.bracket(u, L.bracket(u, v)) + Rat(1, 2) * L.bracket(v, L.bracket(u, v));
  auto co = L.coordinates(e, 0);
  EXPECT_EQ(co.size(), 2u);
  EXPECT_EQ(L.from_coordinates(co, 0), e);
}

TEST(Coordinates, NonLieRejected) {
  FreeLie L({{"u", 0}, {"v", 0}}, 3);
  Tensor uv = L.mul(L.gen(0), L.gen(1));
  EXPECT_FALSE(L.is_lie(uv));
  EXPECT_THROW(L.coordinates(uv, 0), Error);
}

TEST(FreeLie, InhomogeneousDegreeThrows) {
  FreeLie L({{"x", 1}, {"y", 2}}, 3);
  EXPECT_THROW(L.degree_of(L.gen(0) + L.gen(1)), Error);
}

TEST(FreeLie, TruncationFunctorial) {
  std::mt19937 rng(5);
  FreeLie big({{"u", 0}, {"v", 0}}, 5);
  FreeLie small({{"u", 0}, {"v", 0}}, 3);
  for (int t = 0; t < 20; ++t) {
    Tensor a = random_lie(big, 0, 5, rng), b = random_lie(big, 0, 5, rng);
    EXPECT_EQ(truncate(big.bracket(a, b), 3), small.bracket(truncate(a, 3), truncate(b, 3)));
  }
}

TEST(FreeLie, FormatUsesBracketNotation) {
  FreeLie L({{"u", 0}, {"v", 0}}, 3);
  Tensor e = L.gen(0) + Rat(1, 2) * L.bracket(L.gen(0), L.gen(1));
  EXPECT_EQ(L.format(e), "u + 1/2 * [u, v]");
}
