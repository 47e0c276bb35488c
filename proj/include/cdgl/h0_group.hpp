#pragma once
#include "cdgl/dgl.hpp"

namespace cdgl {

// H_0 of a connected dgl (or of a perturbed one) with the BCH group law, read at
// the truncation: a nilpotent quotient approximation.
class H0Group {
 public:
  explicit H0Group(const DGL& l);

  int dimension() const { return static_cast<int>(reps_.size()); }
  const std::vector<Tensor>& representatives() const { return reps_; }
  // Class coordinates of a degree 0 cycle.
  SparseVec class_of(const Tensor& cycle) const;
  Tensor rep_of(const SparseVec& cls) const;
  SparseVec product(const SparseVec& a, const SparseVec& b) const;
  SparseVec inverse(const SparseVec& a) const;
  SparseVec power(const Rat& lambda, const SparseVec& a) const;
  // c[i][j] = class of [e_i, e_j]
  std::vector<std::vector<SparseVec>> bracket_constants() const;
  int nilpotency_class() const;
  bool abelian() const;
  const DGL& dgl() const { return dgl_; }

 private:
  DGL dgl_;
  GradedChainComplex complex_;
  std::unique_ptr<HomologyBasis> hb_;
  std::vector<Tensor> reps_;
};

}  // namespace cdgl
