#include "cdgl/dgl.hpp"

#include <unordered_map>

namespace cdgl {

Tensor apply_morphism(const FreeLie& target, const std::vector<Tensor>& images, const Tensor& x) {
  Tensor r;
  std::unordered_map<Word, Tensor> cache;
  cache.emplace(Word(), target.one());
  for (const auto& [w, c] : x) {
    std::size_t k = w.size();
    while (k > 0 && !cache.count(w.substr(0, k))) --k;
    Tensor cur = cache.at(w.substr(0, k));
    for (std::size_t i = k; i < w.size() && !cur.empty(); ++i) {
      cur = target.mul(cur, images[static_cast<unsigned char>(w[i])]);
      cache.emplace(w.substr(0, i + 1), cur);
    }
    if (k == w.size() || !cur.empty()) add_to(r, cur, c);
  }
  return r;
}

Tensor apply_derivation(const FreeLie& source, const FreeLie& target,
                        const std::vector<Tensor>& values, int degree, const Tensor& x,
                        const std::vector<Tensor>* phi) {
  Tensor r;
  const int cap = target.cap();
  for (const auto& [w, c] : x) {
    const std::size_t n = w.size();
    if (!phi) {
      int pre_deg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        int g = static_cast<unsigned char>(w[i]);
        Rat sc = (sign_pow(static_cast<long>(degree) * pre_deg) > 0) ? c : Rat(-c);
        Word pre = w.substr(0, i), suf = w.substr(i + 1);
        for (const auto& [u, y] : values[g]) {
          if (static_cast<int>(n - 1 + u.size()) > cap) continue;
          auto [it, ins] = r.try_emplace(pre + u + suf, 0);
          it->second += sc * y;
          if (it->second == 0) r.erase(it);
        }
        pre_deg += source.gen_degree(g);
      }
      continue;
    }
    std::vector<Tensor> suffix(n + 1);
    suffix[n] = target.one();
    for (std::size_t i = n; i-- > 0;)
      suffix[i] = target.mul((*phi)[static_cast<unsigned char>(w[i])], suffix[i + 1]);
    Tensor prefix = target.one();
    int pre_deg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int g = static_cast<unsigned char>(w[i]);
      Rat sc = (sign_pow(static_cast<long>(degree) * pre_deg) > 0) ? c : Rat(-c);
      if (!prefix.empty() && !suffix[i + 1].empty())
        add_to(r, target.mul(target.mul(prefix, values[g]), suffix[i + 1]), sc);
      prefix = target.mul(prefix, (*phi)[g]);
      pre_deg += source.gen_degree(g);
    }
  }
  return r;
}

DGL::DGL(std::string name, LiePtr lie, std::vector<Tensor> d)
    : name_(std::move(name)), lie_(std::move(lie)), d_(std::move(d)) {
  if (static_cast<int>(d_.size()) != lie_->ngens())
    throw Error(ErrorKind::Shape, "differential must be given on every generator");
  for (auto& v : d_) v = truncate(v, lie_->cap());
}

Tensor DGL::d(const Tensor& x) const { return apply_derivation(*lie_, *lie_, d_, -1, x); }

void DGL::validate() const {
  const FreeLie& L = *lie_;
  for (int g = 0; g < L.ngens(); ++g) {
    const auto& name = L.gens()[g].name;
    if (!L.is_homogeneous(d_[g], L.gen_degree(g) - 1))
      throw Error(ErrorKind::IllFormedDifferential,
                  "d " + name + " is not homogeneous of degree " + std::to_string(L.gen_degree(g) - 1));
    if (!L.is_lie(d_[g]))
      throw Error(ErrorKind::IllFormedDifferential, "d " + name + " is not a Lie element");
    Tensor dd = d(d_[g]);
    if (!dd.empty()) {
      int len = min_length(dd);
      throw Error(ErrorKind::IllFormedDifferential,
                  "d^2 " + name + " != 0, first nonvanishing length " + std::to_string(len) +
                      ": " + L.format(length_part(dd, len)));
    }
  }
}

DGL build_dgl(std::string name, std::vector<Generator> gens, std::vector<Tensor> d_on_gens,
              int cap) {
  for (const auto& g : gens)
    if (g.degree < -1)
      throw Error(ErrorKind::Degree, "generator " + g.name + " has degree " +
                                         std::to_string(g.degree) + " < -1");
  auto lie = std::make_shared<FreeLie>(std::move(gens), cap);
  DGL l(std::move(name), lie, std::move(d_on_gens));
  l.validate();
  return l;
}

DGL make_dgl(std::string name, std::vector<Generator> gens, int cap,
             const std::function<std::vector<Tensor>(const FreeLie&)>& d_fn) {
  for (const auto& g : gens)
    if (g.degree < -1)
      throw Error(ErrorKind::Degree, "generator " + g.name + " has degree " +
                                         std::to_string(g.degree) + " < -1");
  auto lie = std::make_shared<FreeLie>(std::move(gens), cap);
  DGL l(std::move(name), lie, d_fn(*lie));
  l.validate();
  return l;
}

MCResult check_mc(const DGL& l, const Tensor& a) {
  auto deg = l.lie().degree_of(a);
  if (deg && *deg != -1)
    throw Error(ErrorKind::Degree, "MC candidate has degree " + std::to_string(*deg) + ", expected -1");
  MCResult r;
  r.residue = l.d(a);
  add_to(r.residue, l.lie().bracket(a, a), Rat(1, 2));
  r.ok = r.residue.empty();
  return r;
}

DGL perturb(const DGL& l, const Tensor& a) {
  auto mc = check_mc(l, a);
  if (!mc.ok)
    throw Error(ErrorKind::MCViolation, "not an MC element, residue " + l.lie().format(mc.residue));
  std::vector<Tensor> d = l.d_values();
  for (int g = 0; g < l.lie().ngens(); ++g) add_to(d[g], l.lie().bracket(a, l.lie().gen(g)));
  DGL p(l.name() + "^a", l.lie_ptr(), std::move(d));
  p.validate();
  return p;
}

Derivation ad_derivation(const FreeLie& lie, const Tensor& x) {
  Derivation th;
  auto deg = lie.degree_of(x);
  th.degree = deg ? *deg : 0;
  for (int g = 0; g < lie.ngens(); ++g) th.values.push_back(lie.bracket(x, lie.gen(g)));
  return th;
}

GradedChainComplex lie_complex(const DGL& l, int lo, int hi) {
  GradedChainComplex c;
  c.lo = lo;
  c.hi = hi;
  const FreeLie& L = l.lie();
  std::map<int, std::vector<Tensor>> bases;
  for (int n = lo; n <= hi; ++n) {
    bases[n] = L.basis(n);
    c.basis[n] = L.basis_labels(n);
  }
  for (int n = lo + 1; n <= hi; ++n) {
    std::vector<SparseVec> cols;
    for (const auto& e : bases[n]) cols.push_back(L.coordinates(l.d(e), n - 1));
    c.set_boundary(n, SparseMat::from_columns(c.dim(n - 1), cols));
  }
  c.verify();
  return c;
}

bool is_dgl_morphism(const DGL& src, const DGL& tgt, const std::vector<Tensor>& images,
                     std::string* why) {
  const FreeLie& S = src.lie();
  const FreeLie& T = tgt.lie();
  for (int g = 0; g < S.ngens(); ++g) {
    if (!T.is_homogeneous(images[g], S.gen_degree(g))) {
      if (why) *why = "image of " + S.gens()[g].name + " has the wrong degree";
      return false;
    }
    Tensor lhs = apply_morphism(T, images, src.d_values()[g]);
    Tensor rhs = tgt.d(images[g]);
    if (lhs != rhs) {
      if (why)
        *why = "d does not commute on " + S.gens()[g].name + ": difference " +
               T.format(lhs - rhs);
      return false;
    }
  }
  return true;
}

Meta truncation_meta(const DGL& l) {
  return Meta{{"bracket_length_cap", std::to_string(l.cap())}};
}

}  // namespace cdgl
