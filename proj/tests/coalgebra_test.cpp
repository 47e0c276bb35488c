#include <gtest/gtest.h>

#include <algorithm>

#include "cdgl/convolution.hpp"
#include "support.hpp"

using namespace cdgl;
using namespace testing_support;

namespace {

int find_label(const CDGC& c, const std::string& lab) {
  auto it = std::find(c.labels.begin(), c.labels.end(), lab);
  return it == c.labels.end() ? -1 : static_cast<int>(it - c.labels.begin());
}

}  // namespace

TEST(Chains, OddSphereIsExteriorOnOneClass) {
  ChainsData ch = chains_functor(sphere(3, 4), 3);
  ASSERT_EQ(ch.coalg.size(), 2);
  EXPECT_EQ(ch.coalg.labels[ch.coalg.unit], "1");
  int sx = find_label(ch.coalg, "sx");
  ASSERT_GE(sx, 0);
  EXPECT_EQ(ch.coalg.deg[sx], 3);
  EXPECT_TRUE(ch.coalg.diff.is_zero());
  EXPECT_NO_THROW(ch.coalg.verify());
}

TEST(Chains, EvenSphereHasWedgeSquares) {
  ChainsData ch = chains_functor(sphere(2, 4), 3);
  EXPECT_NO_THROW(ch.coalg.verify());
  int sx = find_label(ch.coalg, "sx");
  int sxx = find_label(ch.coalg, "sx ^ sx");
  int sbr = find_label(ch.coalg, "s[x, x]");
  ASSERT_GE(sx, 0);
  ASSERT_GE(sxx, 0);
  ASSERT_GE(sbr, 0);
  EXPECT_EQ(ch.coalg.deg[sxx], 4);
  EXPECT_NE(ch.coalg.diff.get(sbr, sxx), 0);
  SparseMat d = ch.coalg.diff;
  EXPECT_TRUE((d * d).is_zero());
}

TEST(Chains, D2Sign) {
  // su, sv of degree 1 (|u| = |v| = 0): d(su ^ sv) = (-1)^{|su|} s[u, v] = -s[u, v]
  ChainsData ch = chains_functor(wedge({1, 1}, 2), 2);
  int w = find_label(ch.coalg, "su ^ sv");
  int b = find_label(ch.coalg, "s[u, v]");
  ASSERT_GE(w, 0);
  ASSERT_GE(b, 0);
  EXPECT_EQ(ch.coalg.diff.get(b, w), -1);
  // with |sx| = 2 the sign is +
  ChainsData ch2 = chains_functor(wedge({2, 2}, 2), 2);
  w = find_label(ch2.coalg, "sx ^ sy");
  b = find_label(ch2.coalg, "s[x, y]");
  ASSERT_GE(w, 0);
  ASSERT_GE(b, 0);
  EXPECT_EQ(ch2.coalg.diff.get(b, w), 1);
}

TEST(Chains, CoalgebraAxiomsOnWedge) {
  ChainsData ch = chains_functor(wedge({2, 3}, 3), 3);
  EXPECT_NO_THROW(ch.coalg.verify());
  for (int i = 0; i < ch.coalg.size(); ++i)
    for (const auto& [ab, c] : ch.coalg.reduced_comul(i)) {
      EXPECT_NE(ab.first, ch.coalg.unit);
      EXPECT_NE(ab.second, ch.coalg.unit);
    }
}

TEST(LieFunctor, UnitOnlyIsTrivial) {
  CDGC c;
  c.labels = {"1"};
  c.deg = {0};
  c.word_len = {0};
  c.unit = 0;
  c.comul = {{{0, 0, Rat(1)}}};
  c.diff = SparseMat(1, 1);
  DGL l = lie_functor(c, 3);
  EXPECT_EQ(l.lie().ngens(), 0);
}

TEST(LieFunctor, OddSphereOneGeneratorZeroDifferential) {
  ChainsData ch = chains_functor(sphere(3, 4), 2);
  DGL lc = lie_functor(ch.coalg, 4);
  ASSERT_EQ(lc.lie().ngens(), 1);
  EXPECT_EQ(lc.lie().gen_degree(0), 2);
  EXPECT_TRUE(lc.d(lc.lie().gen(0)).empty());
}

TEST(LieFunctor, HandmadeCoalgebraQuadraticPart) {
  // primitive c of degree 2 and c' of degree 4 with reduced coproduct c (x) c
  CDGC C;
  C.labels = {"1", "c", "c'"};
  C.deg = {0, 2, 4};
  C.word_len = {0, 1, 2};
  C.unit = 0;
  C.comul = {{{0, 0, Rat(1)}},
             {{0, 1, Rat(1)}, {1, 0, Rat(1)}},
             {{0, 2, Rat(1)}, {2, 0, Rat(1)}, {1, 1, Rat(1)}}};
  C.diff = SparseMat(3, 3);
  EXPECT_NO_THROW(C.verify());
  DGL l = lie_functor(C, 3);
  const FreeLie& L = l.lie();
  ASSERT_EQ(L.ngens(), 2);
  int c = L.index_of("s-1(c)"), c2 = L.index_of("s-1(c')");
  Tensor br = L.bracket(L.gen(c), L.gen(c));
  Tensor d = l.d(L.gen(c2));
  EXPECT_TRUE(d == Rat(1, 2) * br || d == Rat(-1, 2) * br) << L.format(d);
}

TEST(Adjunction, AlphaOnOddSphereIsIso) {
  DGL s = sphere(3, 4);
  ChainsData ch = chains_functor(s, 2);
  DGL lc = lie_functor(ch.coalg, 4);
  auto a = alpha_images(ch, lc, s);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], s.lie().gen(0));
  EXPECT_TRUE(is_dgl_morphism(lc, s, a));
}

TEST(Adjunction, AlphaIsMorphismOnEvenSphere) {
  DGL s = sphere(2, 4);
  ChainsData ch = chains_functor(s, 3);
  DGL lc = lie_functor(ch.coalg, 4);
  EXPECT_TRUE(is_dgl_morphism(lc, s, alpha_images(ch, lc, s)));
}

TEST(Adjunction, BetaCounit) {
  ChainsData ch = chains_functor(sphere(2, 3), 2);
  BetaData b = beta_map(ch.coalg, 3, 2);
  EXPECT_TRUE(b.chain_map);
  EXPECT_TRUE(b.counit_ok);
}

TEST(Convolution, OddSphereBasis) {
  DGL s = sphere(3, 4);
  ChainsData ch = chains_functor(s, 2);
  Convolution conv(ch.coalg, ch.lie);
  EXPECT_EQ(conv.basis(2, false).size(), 1u);   // 1 -> x
  EXPECT_EQ(conv.basis(-1, false).size(), 1u);  // sx -> x
  EXPECT_EQ(conv.basis(2, true).size(), 0u);
  HomElem x = conv.basis_elem(2, conv.basis(2, false)[0]);
  HomElem z = conv.basis_elem(-1, conv.basis(-1, false)[0]);
  EXPECT_TRUE(conv.bracket(x, z).v.empty());
  EXPECT_TRUE(conv.bracket(z, z).v.empty());
  EXPECT_TRUE(conv.D(x).v.empty());
  EXPECT_TRUE(conv.D(z).v.empty());
}

TEST(Convolution, UniversalMC) {
  for (int n : {2, 3}) {
    DGL s = sphere(n, 4);
    ChainsData ch = chains_functor(s, 3);
    Convolution conv(ch.coalg, ch.lie);
    EXPECT_TRUE(conv.is_mc(conv.q(ch, -1))) << n;
  }
  ChainsData ch = chains_functor(wedge({1, 1}, 2), 2);
  Convolution conv(ch.coalg, ch.lie);
  EXPECT_TRUE(conv.is_mc(conv.q(ch, -1)));
}

TEST(Convolution, IdentityGivesQ) {
  DGL s = sphere(3, 4);
  ChainsData ch = chains_functor(s, 2);
  Convolution conv(ch.coalg, ch.lie);
  HomElem phibar = mc_of_morphism(conv, ch, identity_images(s.lie()), -1);
  EXPECT_EQ(phibar, conv.q(ch, -1));
}

TEST(Convolution, MorphismMCVanishesOnHigherWords) {
  DGL s = sphere(2, 4);
  ChainsData ch = chains_functor(s, 3);
  Convolution conv(ch.coalg, ch.lie);
  HomElem phibar = mc_of_morphism(conv, ch, identity_images(s.lie()), -1);
  for (const auto& [ce, c] : phibar.v) EXPECT_EQ(ch.coalg.word_len[ce.first], 1);
  EXPECT_TRUE(conv.is_mc(phibar));
}

TEST(Convolution, Splitting) {
  for (int n : {2, 3}) {
    ChainsData ch = chains_functor(sphere(n, 4), 3);
    Convolution conv(ch.coalg, ch.lie);
    std::string why;
    EXPECT_TRUE(conv.verify_splitting(&why)) << why;
  }
}

TEST(Convolution, PerturbedDifferentialSquaresToZero) {
  DGL s = sphere(2, 4);
  ChainsData ch = chains_functor(s, 3);
  Convolution conv(ch.coalg, ch.lie);
  HomElem q = conv.q(ch, -1);
  GradedChainComplex c = conv.complex(-4, 4, &q, true);
  EXPECT_NO_THROW(c.verify());
}

TEST(Convolution, BracketAntisymmetryAndJacobi) {
  DGL s = sphere(2, 4);
  ChainsData ch = chains_functor(s, 3);
  Convolution conv(ch.coalg, ch.lie);
  std::mt19937 rng(3);
  auto random_elem = [&](int k) {
    HomElem f = conv.basis_elem(k, {0, 0});
    f.v.clear();
    for (const auto& ce : conv.basis(k, false)) f.v[ce] = small_rat(rng);
    for (auto it = f.v.begin(); it != f.v.end();) it = it->second == 0 ? f.v.erase(it) : std::next(it);
    return f;
  };
  for (int t = 0; t < 20; ++t) {
    int a = -2 + t % 3, b = -1 + t % 2, c = -1;
    HomElem f = random_elem(a), g = random_elem(b), h = random_elem(c);
    int sign = sign_pow(static_cast<long>(a) * b);
    EXPECT_EQ(conv.add(conv.bracket(f, g), conv.bracket(g, f), sign).v, HomElem{}.v);
    HomElem j1 = conv.bracket(f, conv.bracket(g, h));
    HomElem j2 = conv.bracket(conv.bracket(f, g), h);
    HomElem j3 = conv.bracket(g, conv.bracket(f, h));
    HomElem r = conv.add(conv.add(j1, j2, -1), j3, -sign);
    EXPECT_TRUE(r.v.empty());
  }
}
