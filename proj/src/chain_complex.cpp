#include "cdgl/chain_complex.hpp"

namespace cdgl {

int GradedChainComplex::dim(int n) const {
  auto it = basis.find(n);
  return it == basis.end() ? 0 : static_cast<int>(it->second.size());
}

SparseMat GradedChainComplex::d(int n) const {
  auto it = boundary.find(n);
  if (it != boundary.end()) return it->second;
  return SparseMat(dim(n - 1), dim(n));
}

void GradedChainComplex::set_boundary(int n, SparseMat m) {
  if (m.rows() != dim(n - 1) || m.cols() != dim(n))
    throw Error(ErrorKind::Shape, "boundary in degree " + std::to_string(n) + " has shape " +
                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                      ", expected " + std::to_string(dim(n - 1)) + "x" +
                                      std::to_string(dim(n)));
  boundary[n] = std::move(m);
}

void GradedChainComplex::verify() const {
  for (const auto& [n, m] : boundary)
    if (m.rows() != dim(n - 1) || m.cols() != dim(n))
      throw Error(ErrorKind::IllFormedComplex,
                  "boundary shape mismatch in degree " + std::to_string(n));
  for (int n = lo + 1; n <= hi; ++n) {
    SparseMat dd = d(n - 1) * d(n);
    if (!dd.is_zero())
      throw Error(ErrorKind::IllFormedComplex,
                  "d o d != 0 from degree " + std::to_string(n));
  }
}

HomologyBasis::HomologyBasis(const GradedChainComplex& c, int n) : dn_(c.d(n)) {
  report_.degree = n;
  report_.chains = c.dim(n);
  SparseMat up = c.d(n + 1);
  SparseMat dd = dn_ * up;
  if (!dd.is_zero())
    throw Error(ErrorKind::IllFormedComplex, "d o d != 0 from degree " + std::to_string(n + 1));
  for (const auto& col : up.columns())
    if (ech_.insert(col) >= 0) ++nb_;
  std::vector<SparseVec> z = kernel_basis(dn_);
  for (auto& v : z)
    if (ech_.insert(v) >= 0) report_.cycle_reps.push_back(v);
  report_.dimension = static_cast<int>(report_.cycle_reps.size());
  report_.rank_in = nb_;
  report_.rank_out = report_.chains - static_cast<int>(z.size());
}

SparseVec HomologyBasis::class_of(const SparseVec& cycle) const {
  if (!dn_.apply(cycle).empty())
    throw Error(ErrorKind::Internal, "class requested for a non-cycle in degree " +
                                         std::to_string(report_.degree));
  auto co = ech_.coordinates(cycle);
  if (!co) throw Error(ErrorKind::Internal, "cycle outside the computed cycle space");
  SparseVec r;
  for (const auto& [k, v] : *co)
    if (k >= nb_) r.emplace(k - nb_, v);
  return r;
}

bool HomologyBasis::is_boundary(const SparseVec& cycle) const {
  return class_of(cycle).empty();
}

HomologyReport homology_at(const GradedChainComplex& c, int n) {
  return HomologyBasis(c, n).report();
}

SparseMat ChainMap::at(int n, int rows, int cols) const {
  auto it = m.find(n);
  if (it == m.end()) return SparseMat(rows, cols);
  if (it->second.rows() != rows || it->second.cols() != cols)
    throw Error(ErrorKind::Shape, "chain map shape mismatch in degree " + std::to_string(n));
  return it->second;
}

bool is_chain_map(const GradedChainComplex& a, const GradedChainComplex& b, const ChainMap& f,
                  int lo, int hi) {
  for (int n = lo; n <= hi; ++n) {
    SparseMat lhs = b.d(n) * f.at(n, b.dim(n), a.dim(n));
    SparseMat rhs = f.at(n - 1, b.dim(n - 1), a.dim(n - 1)) * a.d(n);
    for (int i = 0; i < lhs.rows(); ++i)
      if (lhs.row(i) != rhs.row(i)) return false;
  }
  return true;
}

namespace {

SparseMat induced(const HomologyBasis& src, const HomologyBasis& dst, const SparseMat& f) {
  const auto& reps = src.report().cycle_reps;
  SparseMat m(dst.report().dimension, static_cast<int>(reps.size()));
  for (std::size_t j = 0; j < reps.size(); ++j)
    for (const auto& [i, v] : dst.class_of(f.apply(reps[j]))) m.set(i, static_cast<int>(j), v);
  return m;
}

}  // namespace

LESData les_of_ses(const GradedChainComplex& a, const GradedChainComplex& b,
                   const GradedChainComplex& c, const ChainMap& i, const ChainMap& p, int lo,
                   int hi) {
  LESData out;
  out.lo = lo;
  out.hi = hi;
  for (int n = lo - 2; n <= hi + 2; ++n) {
    SparseMat in = i.at(n, b.dim(n), a.dim(n));
    SparseMat pn = p.at(n, c.dim(n), b.dim(n));
    if (!(pn * in).is_zero())
      throw Error(ErrorKind::Exactness, "composite A -> C nonzero in degree " + std::to_string(n));
    if (rank(in) != a.dim(n))
      throw Error(ErrorKind::Exactness, "A -> B not injective in degree " + std::to_string(n));
    if (rank(pn) != c.dim(n))
      throw Error(ErrorKind::Exactness, "B -> C not surjective in degree " + std::to_string(n));
    if (b.dim(n) != a.dim(n) + c.dim(n))
      throw Error(ErrorKind::Exactness, "middle term not exact in degree " + std::to_string(n));
  }
  if (!is_chain_map(a, b, i, lo - 1, hi + 2) || !is_chain_map(b, c, p, lo - 1, hi + 2))
    throw Error(ErrorKind::Exactness, "given maps are not chain maps");

  std::map<int, HomologyBasis> HA, HB, HC;
  for (int n = lo - 1; n <= hi + 1; ++n) {
    HA.emplace(n, HomologyBasis(a, n));
    HB.emplace(n, HomologyBasis(b, n));
    HC.emplace(n, HomologyBasis(c, n));
    out.hA[n] = HA.at(n).report().dimension;
    out.hB[n] = HB.at(n).report().dimension;
    out.hC[n] = HC.at(n).report().dimension;
  }
  for (int n = lo - 1; n <= hi + 1; ++n) {
    out.iH[n] = induced(HA.at(n), HB.at(n), i.at(n, b.dim(n), a.dim(n)));
    out.pH[n] = induced(HB.at(n), HC.at(n), p.at(n, c.dim(n), b.dim(n)));
  }
  for (int n = lo; n <= hi + 1; ++n) {
    const auto& reps = HC.at(n).report().cycle_reps;
    SparseMat pn = p.at(n, c.dim(n), b.dim(n));
    SparseMat im1 = i.at(n - 1, b.dim(n - 1), a.dim(n - 1));
    SparseMat dl(out.hA[n - 1], static_cast<int>(reps.size()));
    for (std::size_t j = 0; j < reps.size(); ++j) {
      auto lift = solve_linear(pn, reps[j]);
      if (!lift) throw Error(ErrorKind::Exactness, "cannot lift along B -> C in degree " + std::to_string(n));
      SparseVec db = b.d(n).apply(*lift);
      auto pull = solve_linear(im1, db);
      if (!pull)
        throw Error(ErrorKind::Exactness, "boundary does not pull back to A in degree " + std::to_string(n - 1));
      for (const auto& [k, v] : HA.at(n - 1).class_of(*pull)) dl.set(k, static_cast<int>(j), v);
    }
    out.delta[n] = dl;
  }
  auto fail = [&](const std::string& s) {
    out.exact = false;
    out.failures.push_back(s);
  };
  for (int n = lo; n <= hi; ++n) {
    const SparseMat& in = out.iH[n];
    const SparseMat& pn = out.pH[n];
    const SparseMat& dn1 = out.delta[n + 1];
    const SparseMat& dn = out.delta[n];
    if (!(in * dn1).is_zero() || rank(dn1) + rank(in) != out.hA[n])
      fail("H_" + std::to_string(n) + "(A)");
    if (!(pn * in).is_zero() || rank(in) + rank(pn) != out.hB[n])
      fail("H_" + std::to_string(n) + "(B)");
    if (!(dn * pn).is_zero() || rank(pn) + rank(dn) != out.hC[n])
      fail("H_" + std::to_string(n) + "(C)");
  }
  return out;
}

GradedChainComplex connected_cover(const GradedChainComplex& c, int n) {
  GradedChainComplex r;
  r.lo = n;
  r.hi = std::max(c.hi, n);
  std::vector<SparseVec> z = kernel_basis(c.d(n));
  const auto& labels = c.basis.count(n) ? c.basis.at(n) : std::vector<std::string>{};
  std::vector<std::string> zl;
  for (const auto& v : z) {
    std::string s;
    for (const auto& [k, x] : v) {
      if (!s.empty()) s += " + ";
      s += (x == 1 ? std::string() : to_string(x) + "*") + labels[k];
    }
    zl.push_back(s);
  }
  for (const auto& [k, b] : c.basis)
    if (k > n) r.basis[k] = b;
  r.basis[n] = zl;
  for (const auto& [k, m] : c.boundary)
    if (k > n + 1) r.boundary[k] = m;
  Echelon<int> e;
  for (const auto& v : z) e.insert(v);
  SparseMat up = c.d(n + 1);
  std::vector<SparseVec> cols;
  for (const auto& col : up.columns()) {
    auto co = e.coordinates(col);
    if (!co) throw Error(ErrorKind::IllFormedComplex, "boundary outside cycles in degree " + std::to_string(n));
    cols.push_back(*co);
  }
  r.boundary[n + 1] = SparseMat::from_columns(static_cast<int>(z.size()), cols);
  if (c.dim(n + 1) == 0) r.boundary.erase(n + 1);
  return r;
}

GradedChainComplex postnikov_truncate(const GradedChainComplex& c, int n) {
  GradedChainComplex r;
  r.lo = c.lo;
  r.hi = std::min(c.hi, n);
  for (const auto& [k, b] : c.basis)
    if (k < n) r.basis[k] = b;
  for (const auto& [k, m] : c.boundary)
    if (k < n) r.boundary[k] = m;
  SparseMat dn = c.d(n);
  std::vector<SparseVec> cols;
  std::vector<std::string> labels;
  Echelon<int> e;
  auto all = dn.columns();
  for (std::size_t j = 0; j < all.size(); ++j)
    if (e.insert(all[j]) >= 0) {
      cols.push_back(all[j]);
      labels.push_back(c.basis.count(n) ? c.basis.at(n)[j] : std::to_string(j));
    }
  r.basis[n] = labels;
  r.boundary[n] = SparseMat::from_columns(c.dim(n - 1), cols);
  return r;
}

}  // namespace cdgl
