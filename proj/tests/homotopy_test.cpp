#include <gtest/gtest.h>

#include "support.hpp"

using namespace cdgl;
using namespace testing_support;

namespace {

struct CircleWedge {
  DGL src = builtin_model("S1", {}, 5).dgl;
  DGL tgt = wedge({1, 1}, 5);
  std::vector<Tensor> f, g;
  CircleWedge() {
    const FreeLie& W = tgt.lie();
    Tensor u = W.gen(0), v = W.gen(1);
    f = {Tensor{}, v};
    g = {Tensor{}, exp_ad(W, u, v)};
  }
};

}  // namespace

TEST(Cylinder, Leibniz) {
  DGL l = builtin_model("S1", {}, 4).dgl;
  Cylinder cyl(l, 4);
  const FreeLie& L = l.lie();
  Tensor x = L.gen(1);
  PolyForm tx = cyl.mul(cyl.t_power(1, false), cyl.constant(x));
  PolyForm expected = cyl.mul(cyl.t_power(0, true), cyl.constant(x));
  add_to(expected, cyl.mul(cyl.t_power(1, false), cyl.constant(l.d(x))));
  EXPECT_EQ(cyl.d(tx), expected);
}

TEST(Cylinder, DtSign) {
  DGL l = builtin_model("S1", {}, 4).dgl;
  Cylinder cyl(l, 4);
  Tensor x = l.lie().gen(1);
  PolyForm dtx = cyl.mul(cyl.t_power(0, true), cyl.constant(x));
  PolyForm expected = scaled(cyl.mul(cyl.t_power(0, true), cyl.constant(l.d(x))), -1);
  EXPECT_EQ(cyl.d(dtx), expected);
}

TEST(Cylinder, BracketOfTMultiples) {
  DGL w = wedge({2, 2}, 3);
  Cylinder cyl(w, 4);
  const FreeLie& L = w.lie();
  PolyForm tx = cyl.mul(cyl.t_power(1, false), cyl.constant(L.gen(0)));
  PolyForm ty = cyl.mul(cyl.t_power(1, false), cyl.constant(L.gen(1)));
  PolyForm expected = cyl.mul(cyl.t_power(2, false), cyl.constant(L.bracket(L.gen(0), L.gen(1))));
  EXPECT_EQ(cyl.bracket(tx, ty), expected);
}

TEST(Cylinder, DSquaredZero) {
  DGL l = builtin_model("S1", {}, 4).dgl;
  Cylinder cyl(l, 5);
  const FreeLie& L = l.lie();
  std::mt19937 rng(8);
  for (int t = 0; t < 10; ++t) {
    PolyForm a;
    for (int k = 0; k <= 3; ++k) {
      a[{k, false}] = random_lie(L, 0, 3, rng, 2);
      a[{k, true}] = random_lie(L, 1, 3, rng, 2);
    }
    EXPECT_TRUE(is_zero(cyl.d(cyl.d(a))));
  }
}

TEST(Cylinder, DegreeAndOverflow) {
  DGL l = builtin_model("S1", {}, 4).dgl;
  Cylinder cyl(l, 2);
  Tensor x = l.lie().gen(1);
  PolyForm dtx = cyl.mul(cyl.t_power(0, true), cyl.constant(x));
  EXPECT_EQ(cyl.degree_of(dtx), -1);
  EXPECT_FALSE(cyl.overflow());
  cyl.mul(cyl.t_power(2, false), cyl.t_power(1, false));
  EXPECT_TRUE(cyl.overflow());
}

TEST(Endpoint, Examples) {
  DGL w = wedge({1, 1}, 4);
  Cylinder cyl(w, 4);
  const FreeLie& L = w.lie();
  Tensor x = L.gen(0), y = L.gen(1);
  PolyForm f = cyl.mul(cyl.t_power(1, false), cyl.constant(x));
  add_to(f, cyl.mul(cyl.t_power(0, true), cyl.constant(y)));
  EXPECT_TRUE(eval_endpoint(f, 0).empty());
  EXPECT_EQ(eval_endpoint(f, 1), x);
  EXPECT_EQ(eval_endpoint(cyl.constant(x), 0), x);
  EXPECT_EQ(eval_endpoint(cyl.constant(x), 1), x);
  auto psi = circle_wedge_witness(L, 4, -1);
  EXPECT_EQ(eval_endpoint(psi[1], 1), exp_ad(L, L.gen(0), L.gen(1)));
}

TEST(Endpoint, IsDglMorphism) {
  DGL l = builtin_model("S1", {}, 4).dgl;
  Cylinder cyl(l, 4);
  const FreeLie& L = l.lie();
  std::mt19937 rng(12);
  for (int t = 0; t < 10; ++t) {
    PolyForm a, b;
    for (int k = 0; k <= 2; ++k) {
      a[{k, false}] = random_lie(L, 0, 2, rng, 2);
      b[{k, true}] = random_lie(L, 0, 2, rng, 2);
    }
    for (int i : {0, 1}) {
      EXPECT_EQ(eval_endpoint(cyl.d(a), i), l.d(eval_endpoint(a, i)));
      EXPECT_EQ(eval_endpoint(cyl.bracket(a, b), i),
                L.bracket(eval_endpoint(a, i), eval_endpoint(b, i)));
    }
  }
}

TEST(CheckHomotopy, ConstantWitness) {
  CircleWedge cw;
  Cylinder cyl(cw.tgt, 6);
  std::vector<PolyForm> w{cyl.constant(cw.f[0]), cyl.constant(cw.f[1])};
  EXPECT_TRUE(check_homotopy(cw.src, cw.tgt, w, cw.f, cw.f, 6).ok);
  EXPECT_FALSE(check_homotopy(cw.src, cw.tgt, w, cw.f, cw.g, 6).ok);
}

TEST(CheckHomotopy, CircleWedgeAccepted) {
  CircleWedge cw;
  auto w = circle_wedge_witness(cw.tgt.lie(), 6, -1);
  HomotopyResult r = check_homotopy(cw.src, cw.tgt, w, cw.f, cw.g, 6);
  EXPECT_TRUE(r.ok) << r.certificate;
  EXPECT_TRUE(r.stable);
}

TEST(CheckHomotopy, SignFlipRejected) {
  CircleWedge cw;
  auto w = circle_wedge_witness(cw.tgt.lie(), 6, 1);
  HomotopyResult r = check_homotopy(cw.src, cw.tgt, w, cw.f, cw.g, 6);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.generator.empty());
  EXPECT_FALSE(r.certificate.empty());
}

TEST(CheckHomotopy, ExponentialFormMatchesAction) {
  CircleWedge cw;
  const FreeLie& W = cw.tgt.lie();
  auto acted = act_on_morphism(cw.tgt, W.gen(0), cw.f);
  EXPECT_EQ(acted, cw.g);
}

TEST(CheckHomotopy, PolyCapTooSmallIsNotTerminated) {
  CircleWedge cw;
  auto w = circle_wedge_witness(cw.tgt.lie(), 2, -1);
  HomotopyResult r = check_homotopy(cw.src, cw.tgt, w, cw.f, cw.g, 2);
  EXPECT_FALSE(r.ok && r.terminated);
}

TEST(CheckHomotopy, FromModelFile) {
  Workspace ws = load_model_text(read_file(models_dir() + "/circle_wedge_homotopy.cdgl"));
  ASSERT_TRUE(ws.ok());
  const Model* src = ws.model("S1src");
  const Model* tgt = ws.model("W");
  ASSERT_TRUE(src && tgt);
  const HomotopyDef* h = ws.homotopy("H");
  const HomotopyDef* hb = ws.homotopy("Hbad");
  ASSERT_TRUE(h && hb);
  auto f = ws.morphism("f")->images, g = ws.morphism("g")->images;
  EXPECT_TRUE(check_homotopy(src->dgl, tgt->dgl, h->witness, f, g, ws.poly_cap).ok);
  EXPECT_FALSE(check_homotopy(src->dgl, tgt->dgl, hb->witness, f, g, ws.poly_cap).ok);
}
