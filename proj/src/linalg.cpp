#include "cdgl/linalg.hpp"

#include <string>

namespace cdgl {

void axpy(SparseVec& y, const Rat& a, const SparseVec& x) {
  if (a == 0) return;
  for (const auto& [k, v] : x) {
    auto [it, ins] = y.try_emplace(k, 0);
    it->second += a * v;
    if (it->second == 0) y.erase(it);
  }
}

SparseVec scaled(const SparseVec& x, const Rat& a) {
  SparseVec r;
  if (a == 0) return r;
  for (const auto& [k, v] : x) r.emplace(k, v * a);
  return r;
}

SparseVec unit_vec(int i) { return SparseVec{{i, Rat(1)}}; }

bool vec_equal(const SparseVec& a, const SparseVec& b) { return a == b; }

SparseMat::SparseMat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::Shape, "negative matrix dimension");
}

SparseMat SparseMat::from_columns(int rows, const std::vector<SparseVec>& cols) {
  SparseMat m(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols_; ++j)
    for (const auto& [i, v] : cols[j]) m.set(i, j, v);
  return m;
}

SparseMat SparseMat::identity(int n) {
  SparseMat m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void SparseMat::check(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw Error(ErrorKind::Shape, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") outside " + std::to_string(rows_) + "x" +
                                      std::to_string(cols_) + " matrix");
}

void SparseMat::set(int i, int j, const Rat& v) {
  check(i, j);
  if (v == 0)
    data_[i].erase(j);
  else
    data_[i][j] = v;
}

void SparseMat::add(int i, int j, const Rat& v) {
  check(i, j);
  if (v == 0) return;
  auto [it, ins] = data_[i].try_emplace(j, 0);
  it->second += v;
  if (it->second == 0) data_[i].erase(it);
}

Rat SparseMat::get(int i, int j) const {
  check(i, j);
  auto it = data_[i].find(j);
  return it == data_[i].end() ? Rat(0) : it->second;
}

SparseVec SparseMat::column(int j) const {
  SparseVec c;
  for (int i = 0; i < rows_; ++i) {
    auto it = data_[i].find(j);
    if (it != data_[i].end()) c.emplace(i, it->second);
  }
  return c;
}

std::vector<SparseVec> SparseMat::columns() const {
  std::vector<SparseVec> cs(cols_);
  for (int i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) cs[j].emplace(i, v);
  return cs;
}

SparseVec SparseMat::apply(const SparseVec& x) const {
  SparseVec y;
  for (const auto& [j, v] : x)
    if (j < 0 || j >= cols_) throw Error(ErrorKind::Shape, "vector index outside matrix columns");
  for (int i = 0; i < rows_; ++i) {
    Rat s = 0;
    for (const auto& [j, a] : data_[i]) {
      auto it = x.find(j);
      if (it != x.end()) s += a * it->second;
    }
    if (s != 0) y.emplace(i, s);
  }
  return y;
}

SparseMat SparseMat::operator*(const SparseMat& o) const {
  if (cols_ != o.rows_)
    throw Error(ErrorKind::Shape, "matrix product of " + std::to_string(rows_) + "x" +
                                      std::to_string(cols_) + " and " + std::to_string(o.rows_) +
                                      "x" + std::to_string(o.cols_));
  SparseMat r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    SparseVec acc;
    for (const auto& [k, a] : data_[i]) axpy(acc, a, o.data_[k]);
    r.data_[i] = std::move(acc);
  }
  return r;
}

SparseMat SparseMat::transpose() const {
  SparseMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) t.data_[j].emplace(i, v);
  return t;
}

bool SparseMat::is_zero() const {
  for (const auto& r : data_)
    if (!r.empty()) return false;
  return true;
}

std::size_t SparseMat::nnz() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

namespace {

using IRow = std::map<int, Int>;

void make_primitive(IRow& r) {
  if (r.empty()) return;
  Int g = 0;
  for (const auto& [k, v] : r) {
    g = gcd(g, v);
    if (g == 1) break;
  }
  if (r.begin()->second < 0) g = -g;
  if (g != 1)
    for (auto& [k, v] : r) v /= g;
}

IRow to_int_row(const SparseVec& v) {
  Int l = 1;
  for (const auto& [k, x] : v) l = lcm(l, Int(x.get_den()));
  IRow r;
  for (const auto& [k, x] : v) {
    Int num = x.get_num() * (l / x.get_den());
    r.emplace(k, num);
  }
  make_primitive(r);
  return r;
}

// x <- b*x - a*p, cancelling x's entry at col.
void cancel(IRow& x, const IRow& p, int col) {
  Int a = x.at(col);
  Int b = p.at(col);
  Int g = gcd(a, b);
  a /= g;
  b /= g;
  if (b != 1)
    for (auto& [k, v] : x) v *= b;
  for (const auto& [k, v] : p) {
    auto [it, ins] = x.try_emplace(k, 0);
    it->second -= a * v;
    if (it->second == 0) x.erase(it);
  }
  make_primitive(x);
}

}  // namespace

RowEchelon rref(const SparseMat& a) {
  std::map<int, IRow> piv;
  for (int i = 0; i < a.rows(); ++i) {
    if (a.row(i).empty()) continue;
    IRow x = to_int_row(a.row(i));
    auto it = x.begin();
    while (it != x.end()) {
      auto p = piv.find(it->first);
      if (p == piv.end()) {
        ++it;
        continue;
      }
      int col = it->first;
      cancel(x, p->second, col);
      it = x.upper_bound(col);
    }
    if (x.empty()) continue;
    int c = x.begin()->first;
    for (auto& [pc, prow] : piv)
      if (prow.count(c)) cancel(prow, x, c);
    piv.emplace(c, std::move(x));
  }
  RowEchelon e;
  for (const auto& [c, row] : piv) {
    Rat lead(row.at(c));
    SparseVec r;
    for (const auto& [k, v] : row) {
      Rat q = Rat(v) / lead;
      q.canonicalize();
      r.emplace(k, q);
    }
    e.rows.push_back(std::move(r));
    e.pivots.push_back(c);
  }
  return e;
}

int rank(const SparseMat& a) { return rref(a).rank(); }

std::vector<SparseVec> kernel_basis(const SparseMat& a) {
  RowEchelon e = rref(a);
  std::vector<bool> is_piv(a.cols(), false);
  for (int c : e.pivots) is_piv[c] = true;
  std::vector<SparseVec> ker;
  for (int f = 0; f < a.cols(); ++f) {
    if (is_piv[f]) continue;
    SparseVec v{{f, Rat(1)}};
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      auto it = e.rows[r].find(f);
      if (it != e.rows[r].end()) v.emplace(e.pivots[r], -it->second);
    }
    ker.push_back(std::move(v));
  }
  return ker;
}

std::optional<SparseVec> solve_linear(const SparseMat& a, const SparseVec& b) {
  for (const auto& [i, v] : b)
    if (i < 0 || i >= a.rows())
      throw Error(ErrorKind::Shape, "right-hand side index " + std::to_string(i) +
                                        " outside " + std::to_string(a.rows()) + " rows");
  SparseMat aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i)
    for (const auto& [j, v] : a.row(i)) aug.set(i, j, v);
  for (const auto& [i, v] : b) aug.set(i, a.cols(), v);
  RowEchelon e = rref(aug);
  SparseVec x;
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    auto it = e.rows[r].find(a.cols());
    if (it != e.rows[r].end()) x.emplace(e.pivots[r], it->second);
  }
  return x;
}

}  // namespace cdgl
