#include "cdgl/coalgebra.hpp"

#include <algorithm>

namespace cdgl {

FiniteLie FiniteLie::from_dgl(const DGL& l) {
  FiniteLie f;
  f.lie = l.lie_ptr();
  const FreeLie& L = l.lie();
  auto [lo, hi] = L.degree_span();
  for (int n = lo; n <= hi; ++n) {
    auto b = L.basis(n);
    if (b.empty()) continue;
    auto lab = L.basis_labels(n);
    f.offset[n] = f.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      f.deg.push_back(n);
      f.labels.push_back(lab[i]);
      f.elems.push_back(b[i]);
    }
  }
  check_resource(f.deg.size(), "truncated Lie algebra");
  for (int i = 0; i < f.size(); ++i) f.d.push_back(f.coords(l.d(f.elems[i])));
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.size(); ++j) f.br[{i, j}] = f.coords(L.bracket(f.elems[i], f.elems[j]));
  return f;
}

SparseVec FiniteLie::coords(const Tensor& t) const {
  if (t.empty()) return {};
  int n = *lie->degree_of(t);
  auto it = offset.find(n);
  if (it == offset.end()) throw Error(ErrorKind::NotInSpan, "element outside the truncated Lie algebra");
  SparseVec r;
  for (const auto& [k, v] : lie->coordinates(t, n)) r.emplace(it->second + k, v);
  return r;
}

Tensor2 CDGC::reduced_comul(int i) const {
  Tensor2 r;
  for (const auto& [a, b, c] : comul[i])
    if (a != unit && b != unit) r[{a, b}] += c;
  for (auto it = r.begin(); it != r.end();) it = (it->second == 0) ? r.erase(it) : std::next(it);
  return r;
}

namespace {

template <class M>
void prune(M& m) {
  for (auto it = m.begin(); it != m.end();) it = (it->second == 0) ? m.erase(it) : std::next(it);
}

}  // namespace

void CDGC::verify() const {
  const int n = size();
  auto fail = [](const std::string& s) { throw Error(ErrorKind::IllFormedComplex, "coalgebra: " + s); };
  for (int i = 0; i < n; ++i) {
    std::map<int, Rat> left, right;
    for (const auto& [a, b, c] : comul[i]) {
      if (a == unit) left[b] += c;
      if (b == unit) right[a] += c;
    }
    prune(left);
    prune(right);
    std::map<int, Rat> want{{i, Rat(1)}};
    if (left != want || right != want) fail("counit law fails on " + labels[i]);

    Tensor2 tw;
    Tensor2 orig;
    for (const auto& [a, b, c] : comul[i]) {
      orig[{a, b}] += c;
      tw[{b, a}] += sign_pow(static_cast<long>(deg[a]) * deg[b]) * c;
    }
    prune(tw);
    prune(orig);
    if (tw != orig) fail("not cocommutative on " + labels[i]);

    std::map<std::tuple<int, int, int>, Rat> l3, r3;
    for (const auto& [a, b, c] : comul[i]) {
      for (const auto& [x, y, e] : comul[a]) l3[{x, y, b}] += c * e;
      for (const auto& [x, y, e] : comul[b]) r3[{a, x, y}] += c * e;
    }
    prune(l3);
    prune(r3);
    if (l3 != r3) fail("not coassociative on " + labels[i]);

    Tensor2 dl, dr;
    for (const auto& [j, v] : diff.column(i))
      for (const auto& [a, b, c] : comul[j]) dl[{a, b}] += v * c;
    for (const auto& [a, b, c] : comul[i]) {
      for (const auto& [k, v] : diff.column(a)) dr[{k, b}] += c * v;
      for (const auto& [k, v] : diff.column(b)) dr[{a, k}] += sign_pow(deg[a]) * c * v;
    }
    prune(dl);
    prune(dr);
    if (dl != dr) fail("d is not a coderivation on " + labels[i]);
    for (const auto& [k, v] : diff.column(i))
      if (deg[k] != deg[i] - 1) fail("d does not have degree -1 on " + labels[i]);
  }
  if (!(diff * diff).is_zero()) fail("d^2 != 0");
  if (!diff.row(unit).empty()) fail("counit does not vanish on boundaries");
}

GradedChainComplex CDGC::as_complex() const {
  GradedChainComplex c;
  if (deg.empty()) return c;
  c.lo = *std::min_element(deg.begin(), deg.end());
  c.hi = *std::max_element(deg.begin(), deg.end());
  std::map<int, std::vector<int>> idx;
  std::vector<int> local(size());
  for (int i = 0; i < size(); ++i) {
    local[i] = static_cast<int>(idx[deg[i]].size());
    idx[deg[i]].push_back(i);
    c.basis[deg[i]].push_back(labels[i]);
  }
  for (int n = c.lo + 1; n <= c.hi; ++n) {
    SparseMat m(c.dim(n - 1), c.dim(n));
    for (int i : idx[n])
      for (const auto& [k, v] : diff.column(i)) m.set(local[k], local[i], v);
    c.set_boundary(n, m);
  }
  return c;
}

namespace {

struct Mono {
  const std::vector<int>& sdeg;
  // Sorts with Koszul signs; returns 0 if an odd factor repeats.
  int normalize(std::vector<int>& s) const {
    int sign = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
      for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
        if (sdeg[s[j - 1]] % 2 != 0 && sdeg[s[j]] % 2 != 0) sign = -sign;
        std::swap(s[j - 1], s[j]);
      }
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] == s[i - 1] && sdeg[s[i]] % 2 != 0) return 0;
    return sign;
  }
  // Sign of moving the positions in mask to the front, keeping relative order.
  int unshuffle_sign(const std::vector<int>& s, unsigned mask) const {
    long e = 0;
    for (std::size_t q = 0; q < s.size(); ++q) {
      if (!(mask & (1u << q))) continue;
      for (std::size_t p = 0; p < q; ++p)
        if (!(mask & (1u << p))) e += static_cast<long>(sdeg[s[p]]) * sdeg[s[q]];
    }
    return sign_pow(e);
  }
};

}  // namespace

ChainsData chains_functor(const DGL& l, int word_cap) {
  if (word_cap < 1) throw Error(ErrorKind::Usage, "word cap must be at least 1");
  if (word_cap > 16) throw Error(ErrorKind::Resource, "word cap above 16");
  ChainsData out;
  out.lie = FiniteLie::from_dgl(l);
  const FiniteLie& F = out.lie;
  std::vector<int> sdeg;
  for (int d : F.deg) sdeg.push_back(d + 1);
  Mono M{sdeg};

  std::vector<std::vector<int>>& monos = out.monos;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    monos.push_back(cur);
    check_resource(monos.size(), "chain coalgebra");
    if (static_cast<int>(cur.size()) == word_cap) return;
    for (int i = start; i < F.size(); ++i) {
      if (!cur.empty() && cur.back() == i && sdeg[i] % 2 != 0) continue;
      cur.push_back(i);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
  std::stable_sort(monos.begin(), monos.end(), [&](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int i : a) da += sdeg[i];
    for (int i : b) db += sdeg[i];
    if (da != db) return da < db;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = static_cast<int>(i);

  CDGC& C = out.coalg;
  C.word_cap = word_cap;
  const int n = static_cast<int>(monos.size());
  C.diff = SparseMat(n, n);
  C.comul.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& m = monos[i];
    int d = 0;
    std::string lab;
    for (int k : m) {
      d += sdeg[k];
      lab += (lab.empty() ? "" : " ^ ") + std::string("s") + F.labels[k];
    }
    if (m.empty()) {
      lab = "1";
      C.unit = i;
    }
    C.labels.push_back(lab);
    C.deg.push_back(d);
    C.word_len.push_back(static_cast<int>(m.size()));
  }
  for (int i = 0; i < n; ++i) {
    const auto& m = monos[i];
    const unsigned k = static_cast<unsigned>(m.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> a, b;
      for (unsigned p = 0; p < k; ++p) ((mask & (1u << p)) ? a : b).push_back(m[p]);
      int s = M.unshuffle_sign(m, mask);
      C.comul[i].emplace_back(index.at(a), index.at(b), Rat(s));
    }
    for (unsigned p = 0; p < k; ++p) {
      unsigned mask = 1u << p;
      int s = M.unshuffle_sign(m, mask);
      std::vector<int> rest;
      for (unsigned q = 0; q < k; ++q)
        if (q != p) rest.push_back(m[q]);
      for (const auto& [t, c] : F.d[m[p]]) {
        std::vector<int> seq{t};
        seq.insert(seq.end(), rest.begin(), rest.end());
        int s2 = M.normalize(seq);
        if (s2 == 0) continue;
        C.diff.add(index.at(seq), i, -c * s * s2);
      }
    }
    for (unsigned p = 0; p < k; ++p)
      for (unsigned q = p + 1; q < k; ++q) {
        unsigned mask = (1u << p) | (1u << q);
        int s = M.unshuffle_sign(m, mask) * sign_pow(sdeg[m[p]]);
        std::vector<int> rest;
        for (unsigned r = 0; r < k; ++r)
          if (r != p && r != q) rest.push_back(m[r]);
        for (const auto& [t, c] : F.bracket(m[p], m[q])) {
          std::vector<int> seq{t};
          seq.insert(seq.end(), rest.begin(), rest.end());
          int s2 = M.normalize(seq);
          if (s2 == 0) continue;
          C.diff.add(index.at(seq), i, c * s * s2);
        }
      }
  }
  return out;
}

namespace {

std::vector<int> reduced_indices(const CDGC& c) {
  std::vector<int> r;
  for (int i = 0; i < c.size(); ++i)
    if (i != c.unit) r.push_back(i);
  return r;
}

}  // namespace

DGL lie_functor(const CDGC& c, int cap) {
  std::vector<int> red = reduced_indices(c);
  std::map<int, int> gen_of;
  std::vector<Generator> gens;
  for (std::size_t k = 0; k < red.size(); ++k) {
    gen_of[red[k]] = static_cast<int>(k);
    gens.push_back({"s-1(" + c.labels[red[k]] + ")", c.deg[red[k]] - 1});
  }
  auto lie = std::make_shared<FreeLie>(gens, cap);
  std::vector<Tensor> d(red.size());
  for (std::size_t k = 0; k < red.size(); ++k) {
    int i = red[k];
    for (const auto& [j, v] : c.diff.column(i)) {
      if (j == c.unit) continue;
      add_to(d[k], lie->gen(gen_of.at(j)), -v);
    }
    for (const auto& [ab, v] : c.reduced_comul(i)) {
      auto [a, b] = ab;
      add_to(d[k], lie->bracket(lie->gen(gen_of.at(a)), lie->gen(gen_of.at(b))),
             Rat(1, 2) * sign_pow(c.deg[a]) * v);
    }
  }
  DGL out("L(C)", lie, std::move(d));
  try {
    out.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::IllFormedDifferential, std::string("ill-formed coalgebra: ") + e.what());
  }
  return out;
}

std::vector<Tensor> alpha_images(const ChainsData& ch, const DGL& lc, const DGL&) {
  std::vector<int> red = reduced_indices(ch.coalg);
  std::vector<Tensor> img(lc.lie().ngens());
  for (std::size_t k = 0; k < red.size(); ++k) {
    const auto& m = ch.monos[red[k]];
    if (m.size() == 1) img[k] = ch.lie.elems[m[0]];
  }
  return img;
}

BetaData beta_map(const CDGC& c, int cap, int word_cap) {
  BetaData out;
  DGL lc = lie_functor(c, cap);
  out.target = chains_functor(lc, word_cap);
  const FiniteLie& F = out.target.lie;
  std::vector<int> sdeg;
  for (int d : F.deg) sdeg.push_back(d + 1);
  Mono M{sdeg};
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < out.target.monos.size(); ++i) index[out.target.monos[i]] = static_cast<int>(i);
  std::vector<int> red = reduced_indices(c);
  std::map<int, int> gen_index;
  for (std::size_t k = 0; k < red.size(); ++k) {
    SparseVec co = F.coords(lc.lie().gen(static_cast<int>(k)));
    gen_index[red[k]] = co.begin()->first;
  }
  const int nt = out.target.coalg.size();
  out.map = SparseMat(nt, c.size());
  for (int i = 0; i < c.size(); ++i) {
    if (c.counit(i) != 0) out.map.add(out.target.coalg.unit, i, c.counit(i));
    if (i == c.unit) continue;
    std::map<std::vector<int>, Rat> level{{{i}, Rat(1)}};
    for (int k = 1; !level.empty(); ++k) {
      if (k > word_cap)
        throw Error(ErrorKind::Resource, "word cap too small for the iterated coproduct");
      for (const auto& [tup, v] : level) {
        std::vector<int> seq;
        for (int t : tup) seq.push_back(gen_index.at(t));
        int s = M.normalize(seq);
        if (s != 0) out.map.add(index.at(seq), i, v * s / factorial(k));
      }
      std::map<std::vector<int>, Rat> next;
      for (const auto& [tup, v] : level)
        for (const auto& [ab, w] : c.reduced_comul(tup.back())) {
          std::vector<int> t2(tup.begin(), tup.end() - 1);
          t2.push_back(ab.first);
          t2.push_back(ab.second);
          next[t2] += v * w;
        }
      prune(next);
      level = std::move(next);
    }
  }
  SparseMat lhs = out.target.coalg.diff * out.map;
  SparseMat rhs = out.map * c.diff;
  out.chain_map = true;
  for (int r = 0; r < lhs.rows(); ++r)
    if (lhs.row(r) != rhs.row(r)) out.chain_map = false;
  out.counit_ok = true;
  for (int i = 0; i < c.size(); ++i)
    if (out.map.get(out.target.coalg.unit, i) != c.counit(i)) out.counit_ok = false;
  return out;
}

}  // namespace cdgl
