#include "cdgl/h0_group.hpp"

#include "cdgl/bch.hpp"

namespace cdgl {

H0Group::H0Group(const DGL& l) : dgl_(l) {
  complex_ = lie_complex(l, -1, 1);
  hb_ = std::make_unique<HomologyBasis>(complex_, 0);
  for (const auto& v : hb_->report().cycle_reps) reps_.push_back(l.lie().from_coordinates(v, 0));
}

SparseVec H0Group::class_of(const Tensor& cycle) const {
  return hb_->class_of(dgl_.lie().coordinates(cycle, 0));
}

Tensor H0Group::rep_of(const SparseVec& cls) const {
  Tensor r;
  for (const auto& [i, v] : cls) add_to(r, reps_[i], v);
  return r;
}

SparseVec H0Group::product(const SparseVec& a, const SparseVec& b) const {
  return class_of(bch(dgl_.lie(), rep_of(a), rep_of(b)));
}

SparseVec H0Group::inverse(const SparseVec& a) const { return scaled(a, -1); }

SparseVec H0Group::power(const Rat& lambda, const SparseVec& a) const { return scaled(a, lambda); }

std::vector<std::vector<SparseVec>> H0Group::bracket_constants() const {
  std::vector<std::vector<SparseVec>> c(reps_.size(), std::vector<SparseVec>(reps_.size()));
  for (std::size_t i = 0; i < reps_.size(); ++i)
    for (std::size_t j = 0; j < reps_.size(); ++j)
      c[i][j] = class_of(dgl_.lie().bracket(reps_[i], reps_[j]));
  return c;
}

int H0Group::nilpotency_class() const {
  if (reps_.empty()) return 0;
  auto c = bracket_constants();
  int n = dimension();
  std::vector<SparseVec> cur;
  for (int i = 0; i < n; ++i) cur.push_back(unit_vec(i));
  for (int k = 1;; ++k) {
    Echelon<int> next;
    std::vector<SparseVec> nb;
    for (int i = 0; i < n; ++i)
      for (const auto& v : cur) {
        SparseVec s;
        for (const auto& [j, x] : v) axpy(s, x, c[i][j]);
        if (!s.empty() && next.insert(s) >= 0) nb.push_back(s);
      }
    if (nb.empty()) return k;
    if (k > n + 1) throw Error(ErrorKind::Internal, "H0 Lie algebra is not nilpotent at the truncation");
    cur = std::move(nb);
  }
}

bool H0Group::abelian() const { return nilpotency_class() <= 1; }

}  // namespace cdgl
