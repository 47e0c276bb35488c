#pragma once
#include "cdgl/coalgebra.hpp"

namespace cdgl {

// Homogeneous linear map C -> L as a value table (coalgebra index, lie index) -> coefficient.
struct HomElem {
  int degree = 0;
  std::map<std::pair<int, int>, Rat> v;
  bool operator==(const HomElem&) const = default;
};

class Convolution {
 public:
  Convolution(const CDGC& c, const FiniteLie& l);

  const CDGC& coalg() const { return c_; }
  const FiniteLie& lie() const { return l_; }
  // Basis pairs in degree k; reduced excludes the counit element.
  std::vector<std::pair<int, int>> basis(int k, bool reduced) const;
  HomElem bracket(const HomElem& f, const HomElem& g) const;
  HomElem D(const HomElem& f) const;
  HomElem add(const HomElem& f, const HomElem& g, const Rat& s = 1) const;
  HomElem basis_elem(int k, std::pair<int, int> ce) const;
  // x^(c) = eps(c) x
  HomElem hat(int lie_index) const;
  // q(sx) = sign * x on word length one, zero elsewhere; C must be C(L) for this L.
  HomElem q(const ChainsData& ch, int sign) const;
  bool is_mc(const HomElem& a) const;
  // (Hom(C-bar, L), D + [twist, -]) in degrees lo..hi.
  GradedChainComplex complex(int lo, int hi, const HomElem* twist, bool reduced) const;
  // Verifies D x^ = (dx)^, [x^, y^] = [x,y]^, [x^, f] = ad_x o f on basis elements.
  bool verify_splitting(std::string* why = nullptr) const;
  SparseVec coords(const HomElem& f, bool reduced) const;

 private:
  const CDGC& c_;
  const FiniteLie& l_;
};

// phi-bar = phi o q for a morphism phi : L' -> L, with C = C(L').
HomElem mc_of_morphism(const Convolution& conv, const ChainsData& src,
                       const std::vector<Tensor>& phi, int q_sign);

}  // namespace cdgl
