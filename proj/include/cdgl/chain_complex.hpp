#pragma once
#include <map>
#include <string>
#include <vector>

#include "cdgl/linalg.hpp"

namespace cdgl {

struct GradedChainComplex {
  int lo = 0;
  int hi = -1;
  std::map<int, std::vector<std::string>> basis;
  std::map<int, SparseMat> boundary;  // n -> matrix of d_n : C_n -> C_{n-1}

  int dim(int n) const;
  SparseMat d(int n) const;
  void set_boundary(int n, SparseMat m);
  // Throws IllFormedComplex if a shape is wrong or d_{n-1} d_n != 0.
  void verify() const;
};

using Meta = std::map<std::string, std::string>;

struct HomologyReport {
  int degree = 0;
  int dimension = 0;
  int chains = 0;
  int rank_out = 0;  // rank of d_n
  int rank_in = 0;   // rank of d_{n+1}
  std::vector<SparseVec> cycle_reps;
  Meta truncation_meta;
};

class HomologyBasis {
 public:
  HomologyBasis(const GradedChainComplex& c, int n);
  const HomologyReport& report() const { return report_; }
  // Coordinates of the class of a cycle in terms of the representatives.
  SparseVec class_of(const SparseVec& cycle) const;
  bool is_boundary(const SparseVec& cycle) const;

 private:
  HomologyReport report_;
  Echelon<int> ech_;
  int nb_ = 0;
  SparseMat dn_;
};

HomologyReport homology_at(const GradedChainComplex& c, int n);

struct ChainMap {
  std::map<int, SparseMat> m;  // n -> matrix A_n -> B_n
  SparseMat at(int n, int rows, int cols) const;
};

// Verifies f d = d f in degrees lo..hi.
bool is_chain_map(const GradedChainComplex& a, const GradedChainComplex& b, const ChainMap& f,
                  int lo, int hi);

struct LESData {
  int lo = 0, hi = -1;
  std::map<int, int> hA, hB, hC;
  std::map<int, SparseMat> iH, pH, delta;  // delta[n] : H_n(C) -> H_{n-1}(A)
  bool exact = true;
  std::vector<std::string> failures;
};

// Long exact sequence of A >-> B ->> C; slots lo..hi. Complexes must carry degrees
// lo-2 .. hi+2 for all maps to be defined.
LESData les_of_ses(const GradedChainComplex& a, const GradedChainComplex& b,
                   const GradedChainComplex& c, const ChainMap& i, const ChainMap& p, int lo,
                   int hi);

// Degree n replaced by its cycles, lower degrees dropped.
GradedChainComplex connected_cover(const GradedChainComplex& c, int n);
// Quotient by the subcomplex of degrees > n together with the cycles in degree n.
GradedChainComplex postnikov_truncate(const GradedChainComplex& c, int n);

}  // namespace cdgl
