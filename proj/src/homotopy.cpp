#include "cdgl/homotopy.hpp"

namespace cdgl {

void add_to(PolyForm& a, const PolyForm& b, const Rat& c) {
  for (const auto& [k, x] : b) {
    add_to(a[k], x, c);
    if (a[k].empty()) a.erase(k);
  }
}

PolyForm scaled(const PolyForm& a, const Rat& c) {
  PolyForm r;
  add_to(r, a, c);
  return r;
}

bool is_zero(const PolyForm& a) {
  for (const auto& [k, x] : a)
    if (!x.empty()) return false;
  return true;
}

Cylinder::Cylinder(const DGL& l, int poly_cap) : l_(l), poly_cap_(poly_cap) {
  if (poly_cap < 0) throw Error(ErrorKind::Usage, "polynomial cap must be non-negative");
}

PolyForm Cylinder::constant(const Tensor& x) const {
  PolyForm r;
  if (!x.empty()) r[{0, false}] = x;
  return r;
}

PolyForm Cylinder::t_power(int k, bool dt) const {
  PolyForm r;
  if (k > poly_cap_) {
    overflow_ = true;
    return r;
  }
  r[{k, dt}] = l_.lie().one();
  return r;
}

PolyForm Cylinder::mul(const PolyForm& a, const PolyForm& b) const {
  const FreeLie& L = l_.lie();
  PolyForm r;
  for (const auto& [ka, x] : a)
    for (const auto& [kb, y] : b) {
      if (ka.second && kb.second) continue;
      PolyKey k{ka.first + kb.first, ka.second || kb.second};
      Tensor p;
      for (const auto& [wx, cx] : x) {
        int sx = (kb.second && (L.word_degree(wx) & 1)) ? -1 : 1;
        for (const auto& [wy, cy] : y) {
          if (static_cast<int>(wx.size() + wy.size()) > L.cap()) continue;
          p[wx + wy] += sx * cx * cy;
        }
      }
      for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
      if (p.empty()) continue;
      if (k.first > poly_cap_) {
        overflow_ = true;
        continue;
      }
      add_to(r[k], p);
      if (r[k].empty()) r.erase(k);
    }
  return r;
}

PolyForm Cylinder::bracket(const PolyForm& a, const PolyForm& b) const {
  const FreeLie& L = l_.lie();
  PolyForm r;
  // split into homogeneous atoms so the Koszul sign is per pair
  auto atoms = [&](const PolyForm& f) {
    std::map<int, PolyForm> out;
    for (const auto& [k, x] : f)
      for (const auto& [w, c] : x) out[L.word_degree(w) - (k.second ? 1 : 0)][k][w] = c;
    return out;
  };
  auto aa = atoms(a), bb = atoms(b);
  for (const auto& [da, pa] : aa)
    for (const auto& [db, pb] : bb) {
      add_to(r, mul(pa, pb));
      add_to(r, mul(pb, pa), -sign_pow(static_cast<long>(da) * db));
    }
  return r;
}

PolyForm Cylinder::d(const PolyForm& a) const {
  PolyForm r;
  for (const auto& [k, x] : a) {
    Tensor dx = l_.d(x);
    if (!k.second) {
      if (k.first > 0) add_to(r[{k.first - 1, true}], x, k.first);
      add_to(r[k], dx);
    } else {
      add_to(r[k], dx, -1);
    }
  }
  for (auto it = r.begin(); it != r.end();) it = it->second.empty() ? r.erase(it) : std::next(it);
  return r;
}

PolyForm Cylinder::apply(const FreeLie& source, const std::vector<PolyForm>& images,
                         const Tensor& x) const {
  std::map<Word, PolyForm> cache;
  cache[Word()] = constant(l_.lie().one());
  std::function<const PolyForm&(const Word&)> img = [&](const Word& w) -> const PolyForm& {
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    PolyForm p = mul(img(w.substr(0, w.size() - 1)),
                     images.at(static_cast<unsigned char>(w.back())));
    return cache.emplace(w, std::move(p)).first->second;
  };
  (void)source;
  PolyForm r;
  for (const auto& [w, c] : x) add_to(r, img(w), c);
  return r;
}

std::optional<int> Cylinder::degree_of(const PolyForm& a) const {
  std::optional<int> deg;
  for (const auto& [k, x] : a)
    for (const auto& [w, c] : x) {
      int d = l_.lie().word_degree(w) - (k.second ? 1 : 0);
      if (deg && *deg != d) throw Error(ErrorKind::Degree, "form is not homogeneous");
      deg = d;
    }
  return deg;
}

bool Cylinder::is_lie(const PolyForm& a) const {
  for (const auto& [k, x] : a)
    if (!l_.lie().is_lie(x)) return false;
  return true;
}

std::string Cylinder::format(const PolyForm& a) const {
  if (a.empty()) return "0";
  std::string s;
  for (const auto& [k, x] : a) {
    if (!s.empty()) s += " + ";
    std::string coef;
    if (k.first == 1) coef = "t";
    else if (k.first > 1) coef = "t^" + std::to_string(k.first);
    if (k.second) coef += coef.empty() ? "dt" : "*dt";
    std::string body = l_.lie().format(x);
    s += coef.empty() ? body : coef + "*(" + body + ")";
  }
  return s;
}

Tensor eval_endpoint(const PolyForm& f, int i) {
  Tensor r;
  for (const auto& [k, x] : f) {
    if (k.second) continue;
    if (i == 0 && k.first > 0) continue;
    add_to(r, x);
  }
  return r;
}

std::vector<Tensor> eval_endpoint(const std::vector<PolyForm>& w, int i) {
  std::vector<Tensor> r;
  for (const auto& f : w) r.push_back(eval_endpoint(f, i));
  return r;
}

namespace {

HomotopyResult check_once(const DGL& src, const DGL& tgt, const std::vector<PolyForm>& witness,
                          const std::vector<Tensor>& phi, const std::vector<Tensor>& psi,
                          int poly_cap) {
  HomotopyResult r;
  const FreeLie& S = src.lie();
  int n = S.ngens();
  if (static_cast<int>(witness.size()) != n || static_cast<int>(phi.size()) != n ||
      static_cast<int>(psi.size()) != n)
    throw Error(ErrorKind::Shape, "witness and morphisms must be given on every source generator");
  Cylinder cyl(tgt, poly_cap);
  std::vector<PolyForm> w;
  for (const auto& f : witness) {
    PolyForm g;
    for (const auto& [k, x] : f) {
      if (k.first > poly_cap) {
        r.terminated = false;
        continue;
      }
      g[k] = truncate(x, tgt.cap());
      if (g[k].empty()) g.erase(k);
    }
    w.push_back(g);
  }
  auto fail = [&](int g, std::string msg) {
    r.ok = false;
    r.generator = S.gens()[g].name;
    r.certificate = std::move(msg);
  };
  r.ok = true;
  for (int g = 0; g < n && r.ok; ++g) {
    if (!cyl.is_lie(w[g])) fail(g, "witness value at " + S.gens()[g].name + " is not a Lie element");
    else {
      std::optional<int> deg;
      try {
        deg = cyl.degree_of(w[g]);
      } catch (const Error&) {
        fail(g, "witness value at " + S.gens()[g].name + " is not homogeneous");
        continue;
      }
      if (deg && *deg != S.gen_degree(g))
        fail(g, "witness value at " + S.gens()[g].name + " has degree " + std::to_string(*deg));
    }
  }
  for (int g = 0; g < n && r.ok; ++g) {
    PolyForm lhs = cyl.d(w[g]);
    PolyForm rhs = cyl.apply(S, w, src.d_values()[g]);
    PolyForm diff = lhs;
    add_to(diff, rhs, -1);
    if (!is_zero(diff))
      fail(g, "d Phi(" + S.gens()[g].name + ") != Phi(d " + S.gens()[g].name + "), difference " +
                  cyl.format(diff));
  }
  for (int g = 0; g < n && r.ok; ++g) {
    if (eval_endpoint(w[g], 0) != truncate(phi[g], tgt.cap()))
      fail(g, "endpoint t = 0 differs from the first morphism at " + S.gens()[g].name);
    else if (eval_endpoint(w[g], 1) != truncate(psi[g], tgt.cap()))
      fail(g, "endpoint t = 1 differs from the second morphism at " + S.gens()[g].name);
  }
  if (cyl.overflow()) r.terminated = false;
  if (!r.terminated && r.ok) {
    r.ok = false;
    r.certificate = "polynomial cap " + std::to_string(poly_cap) + " truncated the witness";
  }
  return r;
}

}  // namespace

HomotopyResult check_homotopy(const DGL& src, const DGL& tgt, const std::vector<PolyForm>& witness,
                              const std::vector<Tensor>& phi, const std::vector<Tensor>& psi,
                              int poly_cap) {
  HomotopyResult r = check_once(src, tgt, witness, phi, psi, poly_cap);
  HomotopyResult r1 = check_once(src, tgt, witness, phi, psi, poly_cap + 1);
  r.stable = r1.ok == r.ok;
  return r;
}

}  // namespace cdgl
