#include "cdgl/derivations.hpp"

#include <algorithm>
#include <set>

#include "cdgl/bch.hpp"

namespace cdgl {

DerComplex::DerComplex(const DGL& src, const DGL& tgt, std::vector<Tensor> phi, bool identity)
    : src_(src), tgt_(tgt), phi_(std::move(phi)), identity_(identity) {
  if (identity_) phi_ = identity_images(tgt_.lie());
  if (static_cast<int>(phi_.size()) != src_.lie().ngens())
    throw Error(ErrorKind::Shape, "morphism must be given on every source generator");
}

DerComplex DerComplex::of(const DGL& l) { return DerComplex(l, l, {}, true); }

int DerComplex::full_dim(int n) const {
  int s = 0;
  for (const auto& g : src_.lie().gens()) s += tgt_.lie().dim(g.degree + n);
  check_resource(static_cast<std::size_t>(s), "derivations in degree " + std::to_string(n));
  return s;
}

int DerComplex::dim(int n) const {
  if (min_degree_ && n < *min_degree_) return 0;
  auto it = restricted_.find(n);
  if (it != restricted_.end()) return static_cast<int>(it->second.size());
  return full_dim(n);
}

std::vector<std::string> DerComplex::labels(int n) const {
  std::vector<std::string> r;
  if (min_degree_ && n < *min_degree_) return r;
  auto it = restricted_.find(n);
  if (it != restricted_.end()) {
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      Derivation th = from_full(n, it->second[i]);
      std::string s;
      for (int g = 0; g < src_.lie().ngens(); ++g) {
        if (th.values[g].empty()) continue;
        if (!s.empty()) s += ", ";
        s += src_.lie().gens()[g].name + " -> " + tgt_.lie().format(th.values[g]);
      }
      r.push_back("{" + s + "}");
    }
    return r;
  }
  for (const auto& g : src_.lie().gens())
    for (const auto& lab : tgt_.lie().basis_labels(g.degree + n)) r.push_back(g.name + " -> " + lab);
  return r;
}

Derivation DerComplex::zero(int n) const {
  Derivation th;
  th.degree = n;
  th.values.assign(src_.lie().ngens(), Tensor{});
  return th;
}

Derivation DerComplex::from_full(int n, const SparseVec& v) const {
  Derivation th = zero(n);
  int off = 0;
  for (int g = 0; g < src_.lie().ngens(); ++g) {
    int deg = src_.lie().gen_degree(g) + n;
    int k = tgt_.lie().dim(deg);
    SparseVec part;
    for (auto it = v.lower_bound(off); it != v.end() && it->first < off + k; ++it)
      part.emplace(it->first - off, it->second);
    th.values[g] = tgt_.lie().from_coordinates(part, deg);
    off += k;
  }
  return th;
}

Derivation DerComplex::elem(int n, int i) const {
  auto it = restricted_.find(n);
  if (it != restricted_.end()) return from_full(n, it->second.at(i));
  return from_full(n, unit_vec(i));
}

SparseVec DerComplex::full_coords(const Derivation& th) const {
  SparseVec r;
  int off = 0;
  for (int g = 0; g < src_.lie().ngens(); ++g) {
    int deg = src_.lie().gen_degree(g) + th.degree;
    for (const auto& [k, v] : tgt_.lie().coordinates(th.values[g], deg)) r.emplace(off + k, v);
    off += tgt_.lie().dim(deg);
  }
  return r;
}

SparseVec DerComplex::coords(const Derivation& th) const {
  if (min_degree_ && th.degree < *min_degree_) {
    if (!is_zero(th))
      throw Error(ErrorKind::NotInSpan, "derivation of degree " + std::to_string(th.degree) +
                                            " outside the restricted complex");
    return {};
  }
  SparseVec full = full_coords(th);
  auto it = restricted_ech_.find(th.degree);
  if (it == restricted_ech_.end()) return full;
  auto co = it->second->coordinates(full);
  if (!co)
    throw Error(ErrorKind::NotInSpan, "derivation outside the restricted degree " +
                                          std::to_string(th.degree) + " subspace");
  return *co;
}

Tensor DerComplex::apply(const Derivation& th, const Tensor& x) const {
  return apply_derivation(src_.lie(), tgt_.lie(), th.values, th.degree, x,
                          identity_ ? nullptr : &phi_);
}

Derivation DerComplex::D(const Derivation& th) const {
  Derivation r = zero(th.degree - 1);
  int s = sign_pow(th.degree);
  for (int g = 0; g < src_.lie().ngens(); ++g) {
    r.values[g] = tgt_.d(th.values[g]);
    add_to(r.values[g], apply(th, src_.d_values()[g]), -s);
  }
  return r;
}

Derivation DerComplex::bracket(const Derivation& a, const Derivation& b) const {
  if (!identity_) throw Error(ErrorKind::Usage, "bracket only defined on Der L");
  Derivation r = zero(a.degree + b.degree);
  int s = sign_pow(static_cast<long>(a.degree) * b.degree);
  for (int g = 0; g < src_.lie().ngens(); ++g) {
    r.values[g] = apply(a, b.values[g]);
    add_to(r.values[g], apply(b, a.values[g]), -s);
  }
  return r;
}

Derivation DerComplex::add(const Derivation& a, const Derivation& b, const Rat& s) const {
  Derivation r = a;
  if (a.degree != b.degree && !is_zero(b) && !is_zero(a))
    throw Error(ErrorKind::Degree, "adding derivations of different degrees");
  if (is_zero(a)) r.degree = b.degree;
  for (int g = 0; g < src_.lie().ngens(); ++g) add_to(r.values[g], b.values[g], s);
  return r;
}

Derivation DerComplex::ad(const Tensor& x) const {
  auto deg = tgt_.lie().degree_of(x);
  Derivation r = zero(deg ? *deg : 0);
  for (int g = 0; g < src_.lie().ngens(); ++g) r.values[g] = tgt_.lie().bracket(x, phi_[g]);
  return r;
}

bool DerComplex::is_zero(const Derivation& th) const {
  for (const auto& v : th.values)
    if (!v.empty()) return false;
  return true;
}

void DerComplex::restrict_degree(int n, const std::vector<Derivation>& basis) {
  auto ech = std::make_shared<Echelon<int>>();
  std::vector<SparseVec> vs;
  for (const auto& th : basis) {
    if (th.degree != n) throw Error(ErrorKind::Degree, "restriction basis has the wrong degree");
    SparseVec v = full_coords(th);
    if (ech->insert(v) >= 0) vs.push_back(v);
  }
  restricted_[n] = std::move(vs);
  restricted_ech_[n] = std::move(ech);
}

GradedChainComplex DerComplex::complex(int lo, int hi) const {
  GradedChainComplex c;
  c.lo = lo;
  c.hi = hi;
  for (int n = lo; n <= hi; ++n) c.basis[n] = labels(n);
  for (int n = lo + 1; n <= hi; ++n) {
    std::vector<SparseVec> cols;
    for (int i = 0; i < dim(n); ++i) cols.push_back(coords(D(elem(n, i))));
    c.set_boundary(n, SparseMat::from_columns(c.dim(n - 1), cols));
  }
  c.verify();
  return c;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::DER_SL: return "DER_SL";
    case Variant::L_DER: return "L_DER";
    case Variant::FDER_SL: return "FDER_SL";
    case Variant::HOM_DER: return "HOM_DER";
  }
  return "?";
}

namespace {

GradedChainComplex suspension_complex(const DGL& l, int lo, int hi) {
  GradedChainComplex c;
  c.lo = lo;
  c.hi = hi;
  const FreeLie& L = l.lie();
  for (int n = lo; n <= hi; ++n)
    for (const auto& lab : L.basis_labels(n - 1)) c.basis[n].push_back("s" + lab);
  for (int n = lo + 1; n <= hi; ++n) {
    std::vector<SparseVec> cols;
    for (const auto& e : L.basis(n - 1)) cols.push_back(scaled(L.coordinates(l.d(e), n - 2), -1));
    c.set_boundary(n, SparseMat::from_columns(c.dim(n - 1), cols));
  }
  c.verify();
  return c;
}

SparseVec shift(const SparseVec& v, int off) {
  SparseVec r;
  for (const auto& [k, x] : v) r.emplace(k + off, x);
  return r;
}

SparseVec slice(const SparseVec& v, int from, int to) {
  SparseVec r;
  for (auto it = v.lower_bound(from); it != v.end() && it->first < to; ++it) r.emplace(it->first - from, it->second);
  return r;
}

}  // namespace

TwistedComplex der_sl(const DerComplex& der, int lo, int hi) {
  TwistedComplex t;
  t.variant = der.identity() ? Variant::DER_SL : Variant::FDER_SL;
  const DGL& tgt = der.target();
  const FreeLie& L = tgt.lie();
  t.sub = der.complex(lo, hi);
  t.quotient = suspension_complex(tgt, lo, hi);
  GradedChainComplex& c = t.total;
  c.lo = lo;
  c.hi = hi;
  for (int n = lo; n <= hi; ++n) {
    c.basis[n] = t.sub.basis[n];
    for (const auto& lab : t.quotient.basis[n]) c.basis[n].push_back(lab);
  }
  for (int n = lo + 1; n <= hi; ++n) {
    int a_n = t.sub.dim(n), a_m = t.sub.dim(n - 1);
    std::vector<SparseVec> cols = t.sub.d(n).columns();
    auto sl_cols = t.quotient.d(n).columns();
    auto els = L.basis(n - 1);
    for (std::size_t j = 0; j < els.size(); ++j) {
      SparseVec col;
      try {
        col = der.coords(der.ad(els[j]));
      } catch (const Error&) {
        throw Error(ErrorKind::Usage, "twisting datum is not a chain map: ad of " +
                                          L.format(els[j]) + " leaves the derivation complex");
      }
      for (const auto& [k, v] : sl_cols[j]) col.emplace(a_m + k, v);
      cols.push_back(col);
    }
    (void)a_n;
    c.set_boundary(n, SparseMat::from_columns(c.dim(n - 1), cols));
  }
  c.verify();
  for (int n = lo; n <= hi; ++n) {
    int a = t.sub.dim(n), q = t.quotient.dim(n);
    SparseMat inc(a + q, a), proj(q, a + q);
    for (int i = 0; i < a; ++i) inc.set(i, i, 1);
    for (int i = 0; i < q; ++i) proj.set(i, a + i, 1);
    t.inclusion.m[n] = inc;
    t.projection.m[n] = proj;
  }
  if (der.identity()) {
    DerComplex dc = der;
    TwistedComplex* self = &t;
    (void)self;
    auto subdims = std::make_shared<std::map<int, int>>();
    for (int n = lo; n <= hi; ++n) (*subdims)[n] = t.sub.dim(n);
    auto decode = [dc, subdims](int n, const SparseVec& v) {
      int a = subdims->count(n) ? subdims->at(n) : dc.dim(n);
      Derivation th = dc.zero(n);
      SparseVec dv = slice(v, 0, a);
      for (const auto& [k, x] : dv) th = dc.add(th, dc.elem(n, k), x);
      th.degree = n;
      Tensor s = dc.target().lie().from_coordinates(slice(v, a, 1 << 30), n - 1);
      return std::make_pair(th, s);
    };
    t.bracket = [dc, subdims, decode](int n1, const SparseVec& v1, int n2, const SparseVec& v2) {
      auto [t1, x1] = decode(n1, v1);
      auto [t2, x2] = decode(n2, v2);
      int n = n1 + n2;
      Derivation th = dc.bracket(t1, t2);
      th.degree = n;
      // [theta, sx] = (-1)^{|theta|} s theta(x); [sx, theta] = -(-1)^{|sx||theta|} [theta, sx]
      Tensor s = Rat(sign_pow(n1)) * dc.apply(t1, x2);
      add_to(s, dc.apply(t2, x1), -sign_pow(static_cast<long>(n1) * n2) * sign_pow(n2));
      int a = subdims->count(n) ? subdims->at(n) : dc.dim(n);
      SparseVec r = dc.coords(th);
      for (const auto& [k, x] : dc.target().lie().coordinates(s, n - 1)) r.emplace(a + k, x);
      return r;
    };
  }
  return t;
}

TwistedComplex l_der(const DerComplex& der, int lo, int hi) {
  if (!der.identity()) throw Error(ErrorKind::Usage, "L x~ Der needs Der L");
  TwistedComplex t;
  t.variant = Variant::L_DER;
  const DGL& l = der.target();
  t.sub = lie_complex(l, lo, hi);
  t.quotient = der.complex(lo, hi);
  GradedChainComplex& c = t.total;
  c.lo = lo;
  c.hi = hi;
  for (int n = lo; n <= hi; ++n) {
    c.basis[n] = t.sub.basis[n];
    for (const auto& lab : t.quotient.basis[n]) c.basis[n].push_back(lab);
  }
  for (int n = lo + 1; n <= hi; ++n) {
    int a_m = t.sub.dim(n - 1);
    std::vector<SparseVec> cols = t.sub.d(n).columns();
    for (const auto& col : t.quotient.d(n).columns()) cols.push_back(shift(col, a_m));
    c.set_boundary(n, SparseMat::from_columns(c.dim(n - 1), cols));
  }
  c.verify();
  for (int n = lo; n <= hi; ++n) {
    int a = t.sub.dim(n), q = t.quotient.dim(n);
    SparseMat inc(a + q, a), proj(q, a + q);
    for (int i = 0; i < a; ++i) inc.set(i, i, 1);
    for (int i = 0; i < q; ++i) proj.set(i, a + i, 1);
    t.inclusion.m[n] = inc;
    t.projection.m[n] = proj;
  }
  DerComplex dc = der;
  t.bracket = [dc](int n1, const SparseVec& v1, int n2, const SparseVec& v2) {
    const FreeLie& L = dc.target().lie();
    auto decode = [&](int n, const SparseVec& v) {
      int a = L.dim(n);
      Tensor x = L.from_coordinates(slice(v, 0, a), n);
      Derivation th = dc.zero(n);
      for (const auto& [k, c] : slice(v, a, 1 << 30)) th = dc.add(th, dc.elem(n, k), c);
      th.degree = n;
      return std::make_pair(x, th);
    };
    auto [x1, t1] = decode(n1, v1);
    auto [x2, t2] = decode(n2, v2);
    int n = n1 + n2;
    Tensor x = L.bracket(x1, x2);
    add_to(x, dc.apply(t1, x2));
    add_to(x, dc.apply(t2, x1), -sign_pow(static_cast<long>(n1) * n2));
    Derivation th = dc.bracket(t1, t2);
    th.degree = n;
    SparseVec r = L.coordinates(x, n);
    for (const auto& [k, c] : dc.coords(th)) r.emplace(L.dim(n) + k, c);
    return r;
  };
  return t;
}

HomDer hom_der(const DGL& l, int word_cap) {
  HomDer out;
  DerComplex der = DerComplex::of(l);
  ChainsData ch = chains_functor(l, word_cap);
  Convolution conv(ch.coalg, ch.lie);
  const FreeLie& L = l.lie();
  auto [llo, lhi] = L.degree_span();
  int gmin = 0, gmax = 0;
  for (int g = 0; g < L.ngens(); ++g) {
    gmin = std::min(gmin, L.gen_degree(g));
    gmax = std::max(gmax, L.gen_degree(g));
    if (g == 0) gmin = gmax = L.gen_degree(g);
  }
  int cmin = 0, cmax = 0;
  for (int d : ch.coalg.deg) {
    cmin = std::min(cmin, d);
    cmax = std::max(cmax, d);
  }
  int lo = std::min(llo - gmax, llo - cmax), hi = std::max(lhi - gmin, lhi - cmin);

  struct Item {
    bool is_der;
    int degree;
    Derivation th;
    HomElem f;
  };
  std::vector<Item> items;
  std::map<int, std::vector<int>> by_deg;
  for (int n = lo; n <= hi; ++n) {
    for (int i = 0; i < der.dim(n); ++i) {
      by_deg[n].push_back(static_cast<int>(items.size()));
      items.push_back({true, n, der.elem(n, i), {}});
      out.labels.push_back(der.labels(n)[i]);
    }
  }
  for (int n = lo; n <= hi; ++n) {
    for (const auto& ce : conv.basis(n, false)) {
      by_deg[n].push_back(static_cast<int>(items.size()));
      items.push_back({false, n, {}, conv.basis_elem(n, ce)});
      out.labels.push_back(ch.coalg.labels[ce.first] + " -> " + ch.lie.labels[ce.second]);
    }
  }
  check_resource(items.size(), "Der x~ Hom basis");
  for (const auto& it : items) out.degrees.push_back(it.degree);

  // local coordinates of a (Derivation, HomElem) pair in degree n
  auto encode = [&](int n, const Derivation* th, const HomElem* f) {
    SparseVec r;
    const auto& idx = by_deg[n];
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Item& it = items[idx[k]];
      (void)it;
    }
    if (th && !der.is_zero(*th)) {
      SparseVec dc = der.full_coords(*th);
      int pos = 0;
      for (int k : idx)
        if (items[k].is_der) {
          auto jt = dc.find(pos);
          if (jt != dc.end()) r.emplace(k, jt->second);
          ++pos;
        }
    }
    if (f && !f->v.empty()) {
      for (int k : idx)
        if (!items[k].is_der) {
          auto ce = items[k].f.v.begin()->first;
          auto jt = f->v.find(ce);
          if (jt != f->v.end()) r.emplace(k, jt->second);
        }
    }
    return r;
  };

  auto theta_after = [&](const Derivation& th, const HomElem& f) {
    HomElem r;
    r.degree = th.degree + f.degree;
    for (const auto& [ce, x] : f.v) {
      Tensor img = der.apply(th, ch.lie.elems[ce.second]);
      for (const auto& [e, y] : ch.lie.coords(img)) r.v[{ce.first, e}] += x * y;
    }
    for (auto it = r.v.begin(); it != r.v.end();) it = (it->second == 0) ? r.v.erase(it) : std::next(it);
    return r;
  };

  const int N = static_cast<int>(items.size());
  out.bracket.assign(N, std::vector<SparseVec>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Item& a = items[i];
      const Item& b = items[j];
      int n = a.degree + b.degree;
      if (n < lo || n > hi) continue;
      if (a.is_der && b.is_der) {
        Derivation th = der.bracket(a.th, b.th);
        out.bracket[i][j] = encode(n, &th, nullptr);
      } else if (a.is_der && !b.is_der) {
        HomElem f = theta_after(a.th, b.f);
        out.bracket[i][j] = encode(n, nullptr, &f);
      } else if (!a.is_der && b.is_der) {
        HomElem f = theta_after(b.th, a.f);
        Rat s = -sign_pow(static_cast<long>(a.degree) * b.degree);
        for (auto& [ce, x] : f.v) x *= s;
        out.bracket[i][j] = encode(n, nullptr, &f);
      } else {
        HomElem f = conv.bracket(a.f, b.f);
        out.bracket[i][j] = encode(n, nullptr, &f);
      }
    }

  GradedChainComplex& c = out.total;
  c.lo = lo;
  c.hi = hi;
  std::map<int, std::map<int, int>> local;
  for (int n = lo; n <= hi; ++n)
    for (int k : by_deg[n]) {
      local[n][k] = static_cast<int>(c.basis[n].size());
      c.basis[n].push_back(out.labels[k]);
    }
  for (int n = lo + 1; n <= hi; ++n) {
    std::vector<SparseVec> cols;
    for (int k : by_deg[n]) {
      const Item& it = items[k];
      SparseVec g;
      if (it.is_der) {
        Derivation d = der.D(it.th);
        g = encode(n - 1, &d, nullptr);
      } else {
        HomElem d = conv.D(it.f);
        g = encode(n - 1, nullptr, &d);
      }
      SparseVec col;
      for (const auto& [gk, v] : g) col.emplace(local[n - 1].at(gk), v);
      if (!col.empty()) out.all_differentials_zero = false;
      cols.push_back(col);
    }
    c.set_boundary(n, SparseMat::from_columns(c.dim(n - 1), cols));
  }
  c.verify();
  return out;
}

std::string GSpec::describe() const {
  switch (kind) {
    case Kind::IDENTITY: return "identity";
    case Kind::STABILIZER: return "stabilizer:" + filtration.name;
    case Kind::SPAN: {
      std::string s = "span:";
      for (std::size_t i = 0; i < span_names.size(); ++i) s += (i ? "," : "") + span_names[i];
      return s;
    }
  }
  return "?";
}

namespace {

std::vector<Tensor> degree0_cycles(const DGL& l) {
  const FreeLie& L = l.lie();
  auto b = L.basis(0);
  std::vector<SparseVec> cols;
  for (const auto& e : b) cols.push_back(L.coordinates(l.d(e), -1));
  SparseMat m = SparseMat::from_columns(L.dim(-1), cols);
  std::vector<Tensor> r;
  for (const auto& v : kernel_basis(m)) r.push_back(L.from_coordinates(v, 0));
  return r;
}

std::vector<Derivation> independent(const DerComplex& der, const std::vector<Derivation>& v,
                                    Echelon<int>* ech_out = nullptr) {
  Echelon<int> ech;
  std::vector<Derivation> r;
  for (const auto& th : v)
    if (ech.insert(der.full_coords(th)) >= 0) r.push_back(th);
  if (ech_out) *ech_out = ech;
  return r;
}

}  // namespace

std::vector<Derivation> r_zero(const DerComplex& der, bool pointed) {
  std::vector<Derivation> gens;
  for (int i = 0; i < der.full_dim(1); ++i) {
    Derivation d = der.D(der.from_full(1, unit_vec(i)));
    d.degree = 0;
    gens.push_back(d);
  }
  if (!pointed)
    for (const auto& x : degree0_cycles(der.target())) {
      Derivation a = der.ad(x);
      a.degree = 0;
      gens.push_back(a);
    }
  return independent(der, gens);
}

DerG0 der_g_zero(const DGL& l, const GSpec& spec, bool pointed) {
  DerG0 out;
  DerComplex der = DerComplex::of(l);
  const FreeLie& L = l.lie();
  out.r0 = r_zero(der, pointed);
  std::vector<Derivation> cand;
  switch (spec.kind) {
    case GSpec::Kind::IDENTITY:
      cand = out.r0;
      break;
    case GSpec::Kind::STABILIZER: {
      spec.filtration.validate(L);
      int n0 = der.full_dim(0);
      std::vector<Derivation> full;
      for (int i = 0; i < n0; ++i) full.push_back(der.from_full(0, unit_vec(i)));
      std::vector<SparseVec> rows;
      // D theta = 0
      int nm = der.full_dim(-1);
      SparseMat dm(nm, n0);
      for (int i = 0; i < n0; ++i)
        for (const auto& [k, v] : der.full_coords(der.D(full[i]))) dm.set(k, i, v);
      for (int k = 0; k < nm; ++k) rows.push_back(dm.row(k));
      // linear part of theta(g) inside the next filtration level
      for (int g = 0; g < L.ngens(); ++g) {
        int lvl = spec.filtration.level_of(g);
        for (int h = 0; h < L.ngens(); ++h) {
          if (spec.filtration.contains(lvl + 1, h)) continue;
          SparseVec row;
          for (int i = 0; i < n0; ++i) {
            auto it = full[i].values[g].find(word1(h));
            if (it != full[i].values[g].end()) row.emplace(i, it->second);
          }
          if (!row.empty()) rows.push_back(row);
        }
      }
      SparseMat cm(static_cast<int>(rows.size()), n0);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [k, v] : rows[r]) cm.set(static_cast<int>(r), k, v);
      for (const auto& v : kernel_basis(cm)) cand.push_back(der.from_full(0, v));
      Echelon<int> ech;
      independent(der, cand, &ech);
      for (const auto& th : out.r0)
        if (!ech.contains(der.full_coords(th))) out.contains_r0 = false;
      if (!out.contains_r0) out.notes.push_back("R0 is not inside the stabilizer; it was added");
      cand.insert(cand.end(), out.r0.begin(), out.r0.end());
      break;
    }
    case GSpec::Kind::SPAN: {
      for (std::size_t i = 0; i < spec.span.size(); ++i) {
        const auto& th = spec.span[i];
        const std::string& nm = i < spec.span_names.size() ? spec.span_names[i] : std::to_string(i);
        if (th.degree != 0) throw Error(ErrorKind::InvalidSubgroup, "derivation " + nm + " does not have degree 0");
        if (!der.is_zero(der.D(th)))
          throw Error(ErrorKind::InvalidSubgroup, "derivation " + nm + " is not a D-cycle");
        if (spec.has_filtration) {
          if (!raises_filtration(L, th.values, spec.filtration))
            throw Error(ErrorKind::InvalidSubgroup, "derivation " + nm + " does not raise filtration " + spec.filtration.name);
        } else if (!is_nilpotent(linear_part(L, th.values))) {
          throw Error(ErrorKind::InvalidSubgroup, "derivation " + nm + " has non-nilpotent linear part, so its exponential is not defined");
        }
        cand.push_back(th);
      }
      cand.insert(cand.end(), out.r0.begin(), out.r0.end());
      break;
    }
  }
  Echelon<int> ech;
  out.basis = independent(der, cand, &ech);
  for (auto& th : out.basis) th.degree = 0;
  for (const auto& a : out.basis) {
    if (!der.is_zero(der.D(a))) throw Error(ErrorKind::Internal, "Der^G_0 element is not a cycle");
    for (const auto& b : out.basis)
      if (!ech.contains(der.full_coords(der.bracket(a, b)))) out.closed = false;
  }
  if (!out.closed)
    throw Error(ErrorKind::InvalidSubgroup,
                "the span together with R0 is not closed under the bracket, so it is not the "
                "Lie algebra of a subgroup (closure under bracket and scalar multiples is required)");
  if (pointed && spec.kind == GSpec::Kind::SPAN)
    for (const auto& x : degree0_cycles(l))
      for (const auto& th : out.basis) {
        Derivation a = der.ad(x);
        a.degree = 0;
        if (!ech.contains(der.full_coords(der.bracket(a, th))))
          throw Error(ErrorKind::InvalidSubgroup, "the span is not preserved by the H0(L) action");
      }
  for (const auto& eta : out.r0)
    for (const auto& th : out.basis) {
      Derivation term = th, acc = th;
      for (int k = 1; k <= L.cap() + L.ngens() + 2; ++k) {
        term = der.bracket(eta, term);
        for (auto& v : term.values) v = Rat(1, k) * v;
        term.degree = 0;
        if (der.is_zero(term)) break;
        acc = der.add(acc, term);
      }
      if (!ech.contains(der.full_coords(acc))) out.saturated = false;
    }
  if (!out.saturated) out.notes.push_back("span is not saturated under conjugation by exp(R0)");
  return out;
}

namespace {

LieQuotient lie_quotient(const DerComplex& der, const std::vector<Derivation>& space,
                         const std::vector<Derivation>& ideal) {
  LieQuotient q;
  Echelon<int> ech;
  int ni = 0;
  for (const auto& th : ideal)
    if (ech.insert(der.full_coords(th)) >= 0) ++ni;
  std::vector<Derivation> reps;
  for (const auto& th : space)
    if (ech.insert(der.full_coords(th)) >= 0) reps.push_back(th);
  q.dimension = static_cast<int>(reps.size());
  for (const auto& r : reps) {
    std::string s;
    for (int g = 0; g < der.source().lie().ngens(); ++g) {
      if (r.values[g].empty()) continue;
      if (!s.empty()) s += ", ";
      s += der.source().lie().gens()[g].name + " -> " + der.target().lie().format(r.values[g]);
    }
    q.labels.push_back("{" + s + "}");
  }
  q.constants.assign(reps.size(), std::vector<SparseVec>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) {
      auto co = ech.coordinates(der.full_coords(der.bracket(reps[i], reps[j])));
      if (!co) throw Error(ErrorKind::InvalidSubgroup, "bracket leaves Der^G_0");
      SparseVec c;
      for (const auto& [k, v] : *co)
        if (k >= ni) c.emplace(k - ni, v);
      q.constants[i][j] = c;
      if (!c.empty()) q.abelian = false;
    }
  // lower central series
  int n = q.dimension;
  if (n == 0) {
    q.nilpotency_class = 0;
    return q;
  }
  std::vector<SparseVec> cur;
  for (int i = 0; i < n; ++i) cur.push_back(unit_vec(i));
  for (int k = 1;; ++k) {
    Echelon<int> e2;
    std::vector<SparseVec> nb;
    for (int i = 0; i < n; ++i)
      for (const auto& v : cur) {
        SparseVec s;
        for (const auto& [j, x] : v) axpy(s, x, q.constants[i][j]);
        if (!s.empty() && e2.insert(s) >= 0) nb.push_back(s);
      }
    if (nb.empty()) {
      q.nilpotency_class = k;
      break;
    }
    if (k > n + 1) {
      q.nilpotency_class = -1;
      break;
    }
    cur = std::move(nb);
  }
  return q;
}

int homology_nilpotency(const GradedChainComplex& c, const TwistedComplex& t, int lo, int hi,
                        bool* limited) {
  if (!t.bracket) return 0;
  std::map<int, std::unique_ptr<HomologyBasis>> hb;
  for (int n = lo; n <= hi; ++n) hb[n] = std::make_unique<HomologyBasis>(c, n);
  // classes as (degree, coords); LCS by brackets with generators
  struct Cls {
    int n;
    SparseVec v;
  };
  std::vector<Cls> gens;
  for (int n = lo; n <= hi; ++n)
    for (int i = 0; i < hb[n]->report().dimension; ++i) gens.push_back({n, unit_vec(i)});
  if (gens.empty()) return 0;
  auto rep = [&](const Cls& x) {
    SparseVec r;
    const auto& reps = hb[x.n]->report().cycle_reps;
    for (const auto& [i, a] : x.v) axpy(r, a, reps[i]);
    return r;
  };
  std::vector<Cls> cur = gens;
  for (int k = 1;; ++k) {
    std::map<int, Echelon<int>> ech;
    std::vector<Cls> next;
    for (const auto& g : gens)
      for (const auto& x : cur) {
        int n = g.n + x.n;
        if (n > hi) {
          *limited = true;
          continue;
        }
        SparseVec b = t.bracket(g.n, rep(g), x.n, rep(x));
        SparseVec cls = hb[n]->class_of(b);
        if (!cls.empty() && ech[n].insert(cls) >= 0) next.push_back({n, cls});
      }
    if (next.empty()) return k;
    if (k > hi + 2) return -1;
    cur = std::move(next);
  }
}

}  // namespace

ClassifyingReport classifying_invariants(const DGL& l, const GSpec& spec, bool pointed, int lo,
                                         int hi) {
  const FreeLie& L = l.lie();
  for (const auto& g : L.gens())
    if (g.degree < 0)
      throw Error(ErrorKind::Usage, "classifying invariants need a connected model; generator " +
                                        g.name + " has negative degree");
  if (lo < 1) lo = 1;
  ClassifyingReport out;
  out.g0 = der_g_zero(l, spec, pointed);
  DerComplex der = DerComplex::of(l);
  std::vector<Derivation> dder1;
  for (int i = 0; i < der.full_dim(1); ++i) {
    Derivation d = der.D(der.from_full(1, unit_vec(i)));
    d.degree = 0;
    dder1.push_back(d);
  }
  der.restrict_degree(0, out.g0.basis);
  der.set_min_degree(0);

  GradedChainComplex base;
  TwistedComplex tw;
  if (!pointed) {
    tw = der_sl(der, -1, hi + 1);
    base = tw.total;
  } else {
    base = der.complex(-1, hi + 1);
    tw.bracket = [der](int n1, const SparseVec& v1, int n2, const SparseVec& v2) {
      Derivation a = der.zero(n1), b = der.zero(n2);
      for (const auto& [k, x] : v1) a = der.add(a, der.elem(n1, k), x);
      for (const auto& [k, x] : v2) b = der.add(b, der.elem(n2, k), x);
      a.degree = n1;
      b.degree = n2;
      Derivation c = der.bracket(a, b);
      c.degree = n1 + n2;
      return der.coords(c);
    };
  }
  GradedChainComplex cover = connected_cover(base, 1);
  for (int n = lo; n <= hi; ++n) {
    HomologyReport r = homology_at(cover, n);
    r.truncation_meta = truncation_meta(l);
    std::vector<std::string> txt;
    const auto& labels = cover.basis[n];
    for (const auto& v : r.cycle_reps) {
      std::string s;
      for (const auto& [k, x] : v) {
        if (!s.empty()) s += " + ";
        s += (x == 1 ? std::string() : to_string(x) + " * ") + "(" + labels[k] + ")";
      }
      txt.push_back(s);
    }
    out.reps[n] = txt;
    out.homology[n] = r;
  }
  // H_0(Der^G) and the image of H_0(ad)
  {
    Echelon<int> e;
    int rb = 0;
    for (const auto& d : dder1)
      if (e.insert(der.full_coords(d)) >= 0) ++rb;
    out.h0_der_dim = static_cast<int>(out.g0.basis.size()) - rb;
    std::vector<Derivation> ideal = dder1;
    if (!pointed) {
      int ra = 0;
      for (const auto& x : degree0_cycles(l)) {
        Derivation a = der.ad(x);
        a.degree = 0;
        ideal.push_back(a);
        if (e.insert(der.full_coords(a)) >= 0) ++ra;
      }
      out.im_h0_ad_dim = ra;
    }
    out.group = lie_quotient(der, out.g0.basis, ideal);
  }
  out.nilpotency_index = homology_nilpotency(base, tw, lo, hi, &out.nilpotency_window_limited);
  GradedChainComplex post = postnikov_truncate(cover, hi + 1);
  for (int n = lo; n <= hi; ++n) out.postnikov[n] = homology_at(post, n).dimension;
  if (pointed) {
    DerComplex full = DerComplex::of(l);
    full.restrict_degree(0, out.g0.basis);
    full.set_min_degree(0);
    TwistedComplex ld = l_der(full, lo - 1, hi + 1);
    for (int n = lo; n <= hi; ++n) out.total_homology[n] = homology_at(ld.total, n).dimension;
  }
  return out;
}

MappingReport mapping_space_pi(const DGL& src, const DGL& tgt, const std::vector<Tensor>& phi,
                               int lo, int hi) {
  std::string why;
  if (!is_dgl_morphism(src, tgt, phi, &why)) throw Error(ErrorKind::Usage, "not a dgl morphism: " + why);
  MappingReport out;
  DerComplex der(src, tgt, phi, false);
  int l0 = std::min(lo, 0);
  TwistedComplex tw = der_sl(der, l0 - 3, hi + 3);
  for (int n = std::max(1, lo); n <= hi; ++n) {
    out.pointed[n] = homology_at(tw.sub, n).dimension;
    out.free[n] = homology_at(tw.total, n).dimension;
  }
  out.fiber_components = homology_at(tw.total, 0).dimension;
  out.les = les_of_ses(tw.sub, tw.total, tw.quotient, tw.inclusion, tw.projection, l0, hi);
  return out;
}

GammaReport gamma_check(const DGL& src, const DGL& tgt, const std::vector<Tensor>& phi,
                        int word_cap) {
  GammaReport rep;
  std::string why;
  if (!is_dgl_morphism(src, tgt, phi, &why)) throw Error(ErrorKind::Usage, "not a dgl morphism: " + why);
  if (src.lie().ngens() == 0) {
    rep.bijective = rep.chain_map = rep.bracket_compatible = true;
    return rep;
  }
  ChainsData ch = chains_functor(src, word_cap);
  DGL lc = lie_functor(ch.coalg, std::max(2, src.cap()));
  std::vector<Tensor> alpha = alpha_images(ch, lc, src);
  std::vector<Tensor> phit;
  for (const auto& a : alpha) phit.push_back(apply_morphism(tgt.lie(), phi, a));
  FiniteLie T = FiniteLie::from_dgl(tgt);
  Convolution conv(ch.coalg, T);
  HomElem phibar = mc_of_morphism(conv, ch, phi, -1);
  DerComplex der(lc, tgt, phit, false);

  std::vector<int> red;
  for (int i = 0; i < ch.coalg.size(); ++i)
    if (i != ch.coalg.unit) red.push_back(i);

  // Gamma(s^-1 theta)(c) = (-1)^{|theta|} theta(s^-1 c)
  auto gamma = [&](const Derivation& th) {
    HomElem f;
    f.degree = th.degree - 1;
    int s = sign_pow(th.degree);
    for (std::size_t k = 0; k < red.size(); ++k)
      for (const auto& [e, v] : T.coords(th.values[k])) f.v[{red[k], e}] += s * v;
    return f;
  };

  int cmin = 0, cmax = 0;
  for (int i : red) {
    cmin = std::min(cmin, ch.coalg.deg[i]);
    cmax = std::max(cmax, ch.coalg.deg[i]);
  }
  int tmin = *std::min_element(T.deg.begin(), T.deg.end());
  int tmax = *std::max_element(T.deg.begin(), T.deg.end());
  int klo = tmin - cmax + 1, khi = tmax - cmin + 1;

  rep.bijective = true;
  std::map<int, std::vector<Derivation>> basis;
  for (int k = klo; k <= khi; ++k) {
    int nd = der.full_dim(k);
    int nh = static_cast<int>(conv.basis(k - 1, true).size());
    if (nd != nh) {
      rep.bijective = false;
      rep.failure = "dimension mismatch in degree " + std::to_string(k);
    }
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < nd; ++i) {
      Derivation th = der.from_full(k, unit_vec(i));
      HomElem f = gamma(th);
      if (f.v.size() != 1 || !seen.insert(f.v.begin()->first).second) rep.bijective = false;
      basis[k].push_back(th);
    }
  }
  rep.chain_map = true;
  for (int k = klo; k <= khi; ++k)
    for (const auto& th : basis[k]) {
      ++rep.checked;
      Derivation dth = der.D(th);
      // D(s^-1 theta) = -s^-1 D theta
      HomElem lhs = gamma(dth);
      for (auto& [ce, v] : lhs.v) v = -v;
      lhs.degree = k - 2;
      HomElem f = gamma(th);
      HomElem rhs = conv.add(conv.D(f), conv.bracket(phibar, f));
      rhs.degree = k - 2;
      if (lhs.v != rhs.v) {
        rep.chain_map = false;
        if (rep.failure.empty())
          rep.failure = "chain map fails on s^-1 of a degree " + std::to_string(k) + " derivation";
      }
    }
  rep.bracket_compatible = true;
  for (int k1 = klo; k1 <= khi; ++k1)
    for (int k2 = klo; k2 <= khi; ++k2)
      for (const auto& a : basis[k1])
        for (const auto& b : basis[k2]) {
          // [s^-1 a, s^-1 b](s^-1 c) = -sum (-1)^{(|b|-1)|c'|} [a(s^-1 c'), b(s^-1 c'')]
          Derivation z = der.zero(k1 + k2 - 1);
          for (std::size_t k = 0; k < red.size(); ++k)
            for (const auto& [ab, w] : ch.coalg.reduced_comul(red[k])) {
              auto ia = std::lower_bound(red.begin(), red.end(), ab.first) - red.begin();
              auto ib = std::lower_bound(red.begin(), red.end(), ab.second) - red.begin();
              Rat s = -w * sign_pow(static_cast<long>(k2 - 1) * ch.coalg.deg[ab.first]);
              add_to(z.values[k], tgt.lie().bracket(a.values[ia], b.values[ib]), s);
            }
          HomElem lhs = gamma(z);
          HomElem rhs = conv.bracket(gamma(a), gamma(b));
          if (lhs.v != rhs.v) {
            rep.bracket_compatible = false;
            if (rep.failure.empty()) rep.failure = "bracket compatibility fails";
          }
        }
  return rep;
}

}  // namespace cdgl
