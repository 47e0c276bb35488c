#pragma once
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "cdgl/bch.hpp"
#include "cdgl/model.hpp"
#include "cdgl/homotopy.hpp"

namespace testing_support {

using namespace cdgl;

inline std::string models_dir() {
  const char* d = std::getenv("CDGL_MODELS_DIR");
  return d ? d : CDGL_MODELS_DEFAULT;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DGL sphere(int n, int cap) { return builtin_model("sphere", {n}, cap).dgl; }
inline DGL wedge(std::vector<int> dims, int cap) { return builtin_model("wedge", dims, cap).dgl; }

inline DGL circle_with_two_loops(int cap) {
  // b of degree -1 is MC and d = [-, b] on the degree 0 generators
  return make_dgl("S1uv", {{"b", -1}, {"u", 0}, {"v", 0}}, cap, [](const FreeLie& L) {
    Tensor b = L.gen(0);
    return std::vector<Tensor>{Rat(-1, 2) * L.bracket(b, b), L.bracket(L.gen(1), b),
                               L.bracket(L.gen(2), b)};
  });
}

// Psi(x) = e^{t ad_u}(v), Psi(b) = sign * u dt into the cylinder on the wedge of two circles.
inline std::vector<PolyForm> circle_wedge_witness(const FreeLie& W, int poly_cap, int sign) {
  Tensor u = W.gen(W.index_of("u")), v = W.gen(W.index_of("v"));
  PolyForm psi_x, psi_b;
  Tensor term = v;
  for (int k = 0; k <= poly_cap && !term.empty(); ++k) {
    psi_x[{k, false}] = Rat(1) / factorial(k) * term;
    term = W.bracket(u, term);
  }
  psi_b[{0, true}] = Rat(sign) * u;
  return {psi_b, psi_x};
}

inline Rat small_rat(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  return rat(num(rng), den(rng));
}

// Random bracket of generators with the given total length, all generators drawn from pool.
inline Tensor random_bracket(const FreeLie& L, const std::vector<int>& pool, int len, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  if (len == 1) return L.gen(pool[pick(rng)]);
  std::uniform_int_distribution<int> split(1, len - 1);
  int k = split(rng);
  return L.bracket(random_bracket(L, pool, k, rng), random_bracket(L, pool, len - k, rng));
}

// Random homogeneous Lie element of degree deg built from brackets of length <= maxlen.
inline Tensor random_lie(const FreeLie& L, int deg, int maxlen, std::mt19937& rng, int terms = 3) {
  Tensor r;
  auto basis = L.basis(deg);
  std::vector<Tensor> usable;
  for (const auto& e : basis)
    if (max_length(e) <= maxlen) usable.push_back(e);
  if (usable.empty()) return r;
  std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 1);
  for (int i = 0; i < terms; ++i) add_to(r, usable[pick(rng)], small_rat(rng));
  return r;
}

// Dense truncated tensor algebra on k letters, words up to length cap; independent of the library.
class DenseTensor {
 public:
  DenseTensor(int letters, int cap) : k_(letters), cap_(cap) {
    offset_.push_back(0);
    int p = 1;
    for (int l = 0; l <= cap; ++l) {
      offset_.push_back(offset_.back() + p);
      p *= k_;
    }
  }
  int size() const { return offset_.back(); }
  int index(const Word& w) const {
    int i = 0;
    for (char c : w) i = i * k_ + static_cast<unsigned char>(c);
    return offset_[w.size()] + i;
  }
  std::vector<Rat> from(const Tensor& t) const {
    std::vector<Rat> v(size());
    for (const auto& [w, c] : t)
      if (static_cast<int>(w.size()) <= cap_) v[index(w)] += c;
    return v;
  }
  std::vector<Rat> mul(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
    std::vector<Rat> r(size());
    for (int la = 0; la <= cap_; ++la)
      for (int lb = 0; la + lb <= cap_; ++lb) {
        int na = offset_[la + 1] - offset_[la], nb = offset_[lb + 1] - offset_[lb];
        for (int i = 0; i < na; ++i) {
          const Rat& x = a[offset_[la] + i];
          if (x == 0) continue;
          for (int j = 0; j < nb; ++j) {
            const Rat& y = b[offset_[lb] + j];
            if (y == 0) continue;
            r[offset_[la + lb] + i * nb + j] += x * y;
          }
        }
      }
    return r;
  }
  std::vector<Rat> exp(const std::vector<Rat>& x) const {
    std::vector<Rat> r(size()), term(size());
    r[0] = 1;
    term[0] = 1;
    for (int k = 1; k <= cap_; ++k) {
      term = mul(term, x);
      for (auto& c : term) c /= k;
      for (int i = 0; i < size(); ++i) r[i] += term[i];
    }
    return r;
  }
  std::vector<Rat> log(const std::vector<Rat>& g) const {
    std::vector<Rat> z = g;
    z[0] -= 1;
    std::vector<Rat> r(size()), pw = z;
    for (int k = 1; k <= cap_; ++k) {
      Rat c = Rat((k % 2) ? 1 : -1, k);
      for (int i = 0; i < size(); ++i) r[i] += c * pw[i];
      pw = mul(pw, z);
    }
    return r;
  }

 private:
  int k_, cap_;
  std::vector<int> offset_;
};

inline Rat bernoulli_oracle(int n) {
  // B_0 = 1, sum_{k<=m} C(m+1,k) B_k = 0, which gives B_1 = -1/2
  std::vector<Rat> b(n + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rat s = 0;
    Int c = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      s += Rat(c) * b[k];
      c = c * (m + 1 - k) / (k + 1);
    }
    b[m] = -s / Rat(m + 1);
  }
  return b[n];
}

inline int witt(int k, int n) {
  auto mobius = [](int m) {
    int r = 1;
    for (int p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
      }
    return m > 1 ? -r : r;
  };
  long s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      long p = 1;
      for (int i = 0; i < n / d; ++i) p *= k;
      s += mobius(d) * p;
    }
  return static_cast<int>(s / n);
}

}  // namespace testing_support
