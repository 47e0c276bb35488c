#pragma once
#include <map>
#include <optional>
#include <vector>

#include "cdgl/error.hpp"
#include "cdgl/rational.hpp"

namespace cdgl {

using SparseVec = std::map<int, Rat>;

void axpy(SparseVec& y, const Rat& a, const SparseVec& x);
SparseVec scaled(const SparseVec& x, const Rat& a);
SparseVec unit_vec(int i);
bool vec_equal(const SparseVec& a, const SparseVec& b);

class SparseMat {
 public:
  SparseMat(int rows = 0, int cols = 0);
  static SparseMat from_columns(int rows, const std::vector<SparseVec>& cols);
  static SparseMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  void set(int i, int j, const Rat& v);
  void add(int i, int j, const Rat& v);
  Rat get(int i, int j) const;
  const SparseVec& row(int i) const { return data_[i]; }
  SparseVec column(int j) const;
  std::vector<SparseVec> columns() const;
  SparseVec apply(const SparseVec& x) const;
  SparseMat operator*(const SparseMat& o) const;
  SparseMat transpose() const;
  bool is_zero() const;
  std::size_t nnz() const;

 private:
  void check(int i, int j) const;
  int rows_, cols_;
  std::vector<SparseVec> data_;
};

struct RowEchelon {
  std::vector<SparseVec> rows;  // reduced, pivot entry 1
  std::vector<int> pivots;      // ascending
  int rank() const { return static_cast<int>(pivots.size()); }
};

RowEchelon rref(const SparseMat& a);
int rank(const SparseMat& a);
std::vector<SparseVec> kernel_basis(const SparseMat& a);
std::optional<SparseVec> solve_linear(const SparseMat& a, const SparseVec& b);

// Incremental echelon basis over an ordered key type; tracks how each stored row
// is built from the independent vectors inserted so far.
template <class Key>
class Echelon {
 public:
  using Vec = std::map<Key, Rat>;

  int size() const { return count_; }

  // Returns the index of the vector among independent ones, or -1 if dependent.
  int insert(const Vec& v) {
    SparseVec comb{{count_, Rat(1)}};
    Vec rem = reduce_impl(v, &comb);
    if (rem.empty()) return -1;
    Rat p = rem.begin()->second;
    if (p != 1) {
      Rat inv = 1 / p;
      for (auto& [k, c] : rem) c *= inv;
      for (auto& [k, c] : comb) c *= inv;
    }
    Key piv = rem.begin()->first;
    rows_.emplace(piv, Row{std::move(rem), std::move(comb)});
    return count_++;
  }

  Vec reduce(const Vec& v) const { return reduce_impl(v, nullptr); }
  bool contains(const Vec& v) const { return reduce(v).empty(); }

  std::optional<SparseVec> coordinates(const Vec& v) const {
    SparseVec comb;
    Vec rem = reduce_impl(v, &comb);
    if (!rem.empty()) return std::nullopt;
    for (auto& [k, c] : comb) c = -c;
    return comb;
  }

 private:
  struct Row {
    Vec v;
    SparseVec comb;
  };

  Vec reduce_impl(const Vec& v, SparseVec* comb) const {
    Vec r = v;
    auto it = r.begin();
    while (it != r.end()) {
      auto p = rows_.find(it->first);
      if (p == rows_.end()) {
        ++it;
        continue;
      }
      Rat c = it->second;
      Key key = it->first;
      for (const auto& [k, x] : p->second.v) {
        auto [jt, ins] = r.try_emplace(k, 0);
        jt->second -= c * x;
        if (jt->second == 0) r.erase(jt);
      }
      if (comb) axpy(*comb, -c, p->second.comb);
      it = r.upper_bound(key);
    }
    return r;
  }

  std::map<Key, Row> rows_;
  int count_ = 0;
};

}  // namespace cdgl
