#pragma once
#include <tuple>

#include "cdgl/dgl.hpp"

namespace cdgl {

// The truncated Lie algebra of a presentation with a global basis over all degrees.
struct FiniteLie {
  LiePtr lie;
  std::vector<int> deg;
  std::vector<std::string> labels;
  std::vector<Tensor> elems;
  std::vector<SparseVec> d;
  std::map<int, int> offset;  // degree -> first global index
  std::map<std::pair<int, int>, SparseVec> br;

  static FiniteLie from_dgl(const DGL& l);
  int size() const { return static_cast<int>(deg.size()); }
  SparseVec coords(const Tensor& t) const;
  const SparseVec& bracket(int i, int j) const { return br.at({i, j}); }
};

using Tensor2 = std::map<std::pair<int, int>, Rat>;

struct CDGC {
  std::vector<std::string> labels;
  std::vector<int> deg;
  std::vector<int> word_len;
  int unit = 0;
  int word_cap = 0;
  std::vector<std::vector<std::tuple<int, int, Rat>>> comul;
  SparseMat diff;  // column j = d(c_j)

  int size() const { return static_cast<int>(deg.size()); }
  Rat counit(int i) const { return i == unit ? Rat(1) : Rat(0); }
  Tensor2 reduced_comul(int i) const;
  // Throws IllFormedComplex with the failing axiom.
  void verify() const;
  GradedChainComplex as_complex() const;
};

struct ChainsData {
  FiniteLie lie;
  CDGC coalg;
  std::vector<std::vector<int>> monos;  // basis monomials in lie indices
};

// Lambda^{<=w}(sL) with d = d1 + d2 and the shuffle coproduct.
ChainsData chains_functor(const DGL& l, int word_cap);

// Free dgl on the desuspension of the reduced coalgebra.
DGL lie_functor(const CDGC& c, int cap);

// alpha : LC(L) -> L; images of generators s^-1 c.
std::vector<Tensor> alpha_images(const ChainsData& ch, const DGL& lc, const DGL& l);

struct BetaData {
  ChainsData target;  // C(L(C)) at the given caps
  SparseMat map;      // C -> C(L(C))
  bool chain_map = false;
  bool counit_ok = false;
};
BetaData beta_map(const CDGC& c, int cap, int word_cap);

}  // namespace cdgl
