#include "cdgl/gauge.hpp"

#include "cdgl/bch.hpp"

namespace cdgl {

Tensor gauge_act(const DGL& l, const Tensor& x, const Tensor& a) {
  const FreeLie& L = l.lie();
  auto dx = L.degree_of(x);
  if (dx && *dx != 0) throw Error(ErrorKind::Degree, "gauge element must have degree 0");
  auto in = check_mc(l, a);
  if (!in.ok) throw Error(ErrorKind::MCViolation, "gauge target is not MC: residue " + L.format(in.residue));
  Tensor r = a, t1 = a, t2 = l.d(x);
  add_to(r, t2, -1);
  for (int i = 1;; ++i) {
    t1 = Rat(1, i) * L.bracket(x, t1);
    t2 = Rat(1, i + 1) * L.bracket(x, t2);
    if (t1.empty() && t2.empty()) break;
    if (i > L.cap() + 1) throw Error(ErrorKind::Divergence, "gauge series does not terminate");
    add_to(r, t1);
    add_to(r, t2, -1);
  }
  auto out = check_mc(l, r);
  if (!out.ok)
    throw Error(ErrorKind::Internal, "truncation inconsistency: gauge result is not MC, residue " +
                                         L.format(out.residue));
  return r;
}

GaugeResult gauge_equivalent(const DGL& l, const Tensor& a, const Tensor& b) {
  const FreeLie& L = l.lie();
  for (const Tensor* t : {&a, &b}) {
    auto mc = check_mc(l, *t);
    if (!mc.ok) throw Error(ErrorKind::MCViolation, "not an MC element: " + L.format(*t));
  }
  GaugeResult res;
  Tensor x;
  int last = 0;
  for (;;) {
    Tensor c = gauge_act(l, x, a);
    Tensor r = c - b;
    if (r.empty()) {
      res.equivalent = true;
      res.witness = x;
      return res;
    }
    int ell = min_length(r);
    if (ell <= last) throw Error(ErrorKind::Internal, "gauge lifting made no progress");
    last = ell;
    ++res.stages;
    std::vector<Tensor> zs;
    for (int len = 1; len <= ell; ++len)
      for (const auto& z : L.lie_basis(0, len)) zs.push_back(z);
    std::map<Word, int> rows;
    std::vector<Tensor> images;
    for (const auto& z : zs) {
      Tensor dz = lengths_upto(l.d(z) + L.bracket(c, z), ell);
      for (const auto& [w, v] : dz) rows.emplace(w, 0);
      images.push_back(std::move(dz));
    }
    Tensor target = lengths_upto(r, ell);
    for (const auto& [w, v] : target) rows.emplace(w, 0);
    int k = 0;
    for (auto& [w, i] : rows) i = k++;
    SparseMat m(k, static_cast<int>(zs.size()));
    for (std::size_t j = 0; j < images.size(); ++j)
      for (const auto& [w, v] : images[j]) m.set(rows.at(w), static_cast<int>(j), v);
    SparseVec rhs;
    for (const auto& [w, v] : target) rhs.emplace(rows.at(w), v);
    auto sol = solve_linear(m, rhs);
    if (!sol) {
      res.obstruction_length = ell;
      return res;
    }
    Tensor z;
    for (const auto& [j, v] : *sol) add_to(z, zs[j], v);
    x = bch(L, z, x);
  }
}

}  // namespace cdgl
