#include "cdgl/convolution.hpp"

namespace cdgl {

namespace {

void prune(std::map<std::pair<int, int>, Rat>& m) {
  for (auto it = m.begin(); it != m.end();) it = (it->second == 0) ? m.erase(it) : std::next(it);
}

std::map<int, SparseVec> by_source(const HomElem& f) {
  std::map<int, SparseVec> r;
  for (const auto& [ce, v] : f.v) r[ce.first][ce.second] += v;
  return r;
}

}  // namespace

Convolution::Convolution(const CDGC& c, const FiniteLie& l) : c_(c), l_(l) {}

std::vector<std::pair<int, int>> Convolution::basis(int k, bool reduced) const {
  std::vector<std::pair<int, int>> r;
  for (int i = 0; i < c_.size(); ++i) {
    if (reduced && i == c_.unit) continue;
    for (int e = 0; e < l_.size(); ++e)
      if (l_.deg[e] - c_.deg[i] == k) r.emplace_back(i, e);
  }
  check_resource(r.size(), "convolution algebra in degree " + std::to_string(k));
  return r;
}

HomElem Convolution::bracket(const HomElem& f, const HomElem& g) const {
  HomElem r;
  r.degree = f.degree + g.degree;
  auto fs = by_source(f), gs = by_source(g);
  for (int i = 0; i < c_.size(); ++i)
    for (const auto& [a, b, co] : c_.comul[i]) {
      auto fa = fs.find(a);
      auto gb = gs.find(b);
      if (fa == fs.end() || gb == gs.end()) continue;
      Rat s = co * sign_pow(static_cast<long>(g.degree) * c_.deg[a]);
      for (const auto& [e1, x] : fa->second)
        for (const auto& [e2, y] : gb->second)
          for (const auto& [e3, z] : l_.bracket(e1, e2)) r.v[{i, e3}] += s * x * y * z;
    }
  prune(r.v);
  return r;
}

HomElem Convolution::D(const HomElem& f) const {
  HomElem r;
  r.degree = f.degree - 1;
  for (const auto& [ce, x] : f.v)
    for (const auto& [e, y] : l_.d[ce.second]) r.v[{ce.first, e}] += x * y;
  int s = sign_pow(f.degree);
  auto fs = by_source(f);
  for (int i = 0; i < c_.size(); ++i)
    for (const auto& [j, a] : c_.diff.column(i)) {
      auto it = fs.find(j);
      if (it == fs.end()) continue;
      for (const auto& [e, y] : it->second) r.v[{i, e}] -= s * a * y;
    }
  prune(r.v);
  return r;
}

HomElem Convolution::add(const HomElem& f, const HomElem& g, const Rat& s) const {
  HomElem r = f;
  if (!f.v.empty() && !g.v.empty() && f.degree != g.degree)
    throw Error(ErrorKind::Degree, "adding maps of different degrees");
  if (f.v.empty()) r.degree = g.degree;
  for (const auto& [ce, x] : g.v) r.v[ce] += s * x;
  prune(r.v);
  return r;
}

HomElem Convolution::basis_elem(int k, std::pair<int, int> ce) const {
  HomElem r;
  r.degree = k;
  r.v[ce] = 1;
  return r;
}

HomElem Convolution::hat(int lie_index) const {
  HomElem r;
  r.degree = l_.deg[lie_index];
  r.v[{c_.unit, lie_index}] = 1;
  return r;
}

HomElem Convolution::q(const ChainsData& ch, int sign) const {
  HomElem r;
  r.degree = -1;
  for (int i = 0; i < ch.coalg.size(); ++i)
    if (ch.monos[i].size() == 1) r.v[{i, ch.monos[i][0]}] = sign;
  return r;
}

bool Convolution::is_mc(const HomElem& a) const {
  HomElem r = add(D(a), bracket(a, a), Rat(1, 2));
  return r.v.empty();
}

SparseVec Convolution::coords(const HomElem& f, bool reduced) const {
  auto b = basis(f.degree, reduced);
  std::map<std::pair<int, int>, int> idx;
  for (std::size_t i = 0; i < b.size(); ++i) idx[b[i]] = static_cast<int>(i);
  SparseVec r;
  for (const auto& [ce, x] : f.v) {
    auto it = idx.find(ce);
    if (it == idx.end()) throw Error(ErrorKind::NotInSpan, "map outside the convolution basis");
    r[it->second] = x;
  }
  return r;
}

GradedChainComplex Convolution::complex(int lo, int hi, const HomElem* twist, bool reduced) const {
  GradedChainComplex g;
  g.lo = lo;
  g.hi = hi;
  std::map<int, std::vector<std::pair<int, int>>> bases;
  for (int k = lo; k <= hi; ++k) {
    bases[k] = basis(k, reduced);
    for (const auto& [c, e] : bases[k]) g.basis[k].push_back(c_.labels[c] + " -> " + l_.labels[e]);
  }
  for (int k = lo + 1; k <= hi; ++k) {
    std::vector<SparseVec> cols;
    for (const auto& ce : bases[k]) {
      HomElem f = basis_elem(k, ce);
      HomElem df = D(f);
      if (twist) df = add(df, bracket(*twist, f));
      df.degree = k - 1;
      cols.push_back(coords(df, reduced));
    }
    g.set_boundary(k, SparseMat::from_columns(g.dim(k - 1), cols));
  }
  g.verify();
  return g;
}

bool Convolution::verify_splitting(std::string* why) const {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  for (int x = 0; x < l_.size(); ++x) {
    HomElem dx;
    dx.degree = l_.deg[x] - 1;
    for (const auto& [e, v] : l_.d[x]) dx.v[{c_.unit, e}] = v;
    if (D(hat(x)) != dx) return fail("D does not commute with x -> x^ on " + l_.labels[x]);
    for (int y = 0; y < l_.size(); ++y) {
      HomElem bxy;
      bxy.degree = l_.deg[x] + l_.deg[y];
      for (const auto& [e, v] : l_.bracket(x, y)) bxy.v[{c_.unit, e}] = v;
      HomElem got = bracket(hat(x), hat(y));
      if (got.v != bxy.v) return fail("bracket not preserved on " + l_.labels[x] + ", " + l_.labels[y]);
    }
    for (int i = 0; i < c_.size(); ++i) {
      if (i == c_.unit) continue;
      for (int e = 0; e < l_.size(); ++e) {
        HomElem f = basis_elem(l_.deg[e] - c_.deg[i], {i, e});
        HomElem want;
        want.degree = f.degree + l_.deg[x];
        for (const auto& [e2, v] : l_.bracket(x, e)) want.v[{i, e2}] = v;
        if (bracket(hat(x), f).v != want.v)
          return fail("[x^, f] != ad_x o f for x = " + l_.labels[x] + ", f = " + c_.labels[i] + " -> " + l_.labels[e]);
      }
    }
  }
  return true;
}

HomElem mc_of_morphism(const Convolution& conv, const ChainsData& src,
                       const std::vector<Tensor>& phi, int q_sign) {
  const FiniteLie& S = src.lie;
  const FiniteLie& T = conv.lie();
  HomElem r;
  r.degree = -1;
  for (int i = 0; i < src.coalg.size(); ++i) {
    const auto& m = src.monos[i];
    if (m.size() != 1) continue;
    Tensor img = apply_morphism(*T.lie, phi, S.elems[m[0]]);
    for (const auto& [e, v] : T.coords(img)) r.v[{i, e}] = q_sign * v;
  }
  return r;
}

}  // namespace cdgl
