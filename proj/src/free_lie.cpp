#include "cdgl/free_lie.hpp"

#include <algorithm>
#include <functional>

namespace cdgl {

void add_to(Tensor& a, const Tensor& b, const Rat& c) {
  if (c == 0) return;
  for (const auto& [w, x] : b) {
    auto [it, ins] = a.try_emplace(w, 0);
    it->second += c * x;
    if (it->second == 0) a.erase(it);
  }
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  Tensor r = a;
  add_to(r, b);
  return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  Tensor r = a;
  add_to(r, b, -1);
  return r;
}

Tensor operator-(const Tensor& a) {
  Tensor r;
  for (const auto& [w, x] : a) r.emplace(w, -x);
  return r;
}

Tensor operator*(const Rat& c, const Tensor& a) {
  Tensor r;
  if (c == 0) return r;
  for (const auto& [w, x] : a) r.emplace(w, c * x);
  return r;
}

Tensor truncate(const Tensor& t, int cap) {
  Tensor r;
  for (const auto& [w, x] : t)
    if (static_cast<int>(w.size()) <= cap) r.emplace(w, x);
  return r;
}

Tensor length_part(const Tensor& t, int len) {
  Tensor r;
  for (const auto& [w, x] : t)
    if (static_cast<int>(w.size()) == len) r.emplace(w, x);
  return r;
}

Tensor lengths_upto(const Tensor& t, int len) { return truncate(t, len); }

int min_length(const Tensor& t) {
  int m = -1;
  for (const auto& [w, x] : t)
    if (m < 0 || static_cast<int>(w.size()) < m) m = static_cast<int>(w.size());
  return m;
}

int max_length(const Tensor& t) {
  int m = -1;
  for (const auto& [w, x] : t) m = std::max(m, static_cast<int>(w.size()));
  return m;
}

FreeLie::FreeLie(std::vector<Generator> gens, int cap) : gens_(std::move(gens)), cap_(cap) {
  if (cap_ < 1) throw Error(ErrorKind::Usage, "truncation level must be at least 1");
  if (gens_.size() > 250) throw Error(ErrorKind::Resource, "too many generators");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (i == 0 || gens_[i].degree < min_deg_) min_deg_ = gens_[i].degree;
    if (i == 0 || gens_[i].degree > max_deg_) max_deg_ = gens_[i].degree;
  }
}

int FreeLie::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return static_cast<int>(i);
  return -1;
}

int FreeLie::word_degree(const Word& w) const {
  int d = 0;
  for (char c : w) d += gens_[static_cast<unsigned char>(c)].degree;
  return d;
}

std::optional<int> FreeLie::degree_of(const Tensor& t) const {
  std::optional<int> d;
  for (const auto& [w, x] : t) {
    int k = word_degree(w);
    if (d && *d != k) throw Error(ErrorKind::Degree, "element is not homogeneous: " + format(t));
    d = k;
  }
  return d;
}

bool FreeLie::is_homogeneous(const Tensor& t, int degree) const {
  for (const auto& [w, x] : t)
    if (word_degree(w) != degree) return false;
  return true;
}

Tensor FreeLie::gen(int i) const { return Tensor{{word1(i), Rat(1)}}; }

Tensor FreeLie::one() const { return Tensor{{Word(), Rat(1)}}; }

Tensor FreeLie::mul(const Tensor& a, const Tensor& b) const {
  Tensor r;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      if (static_cast<int>(u.size() + v.size()) > cap_) continue;
      auto [it, ins] = r.try_emplace(u + v, 0);
      it->second += x * y;
      if (it->second == 0) r.erase(it);
    }
  return r;
}

Tensor FreeLie::bracket(const Tensor& a, const Tensor& b) const {
  Tensor r;
  for (const auto& [u, x] : a) {
    int du = word_degree(u);
    for (const auto& [v, y] : b) {
      if (static_cast<int>(u.size() + v.size()) > cap_) continue;
      int dv = word_degree(v);
      Rat c = x * y;
      {
        auto [it, ins] = r.try_emplace(u + v, 0);
        it->second += c;
        if (it->second == 0) r.erase(it);
      }
      {
        auto [it, ins] = r.try_emplace(v + u, 0);
        if (sign_pow(static_cast<long>(du) * dv) > 0)
          it->second -= c;
        else
          it->second += c;
        if (it->second == 0) r.erase(it);
      }
    }
  }
  return r;
}

Tensor FreeLie::ad_pow(const Tensor& x, const Tensor& y, int k) const {
  Tensor r = y;
  for (int i = 0; i < k && !r.empty(); ++i) r = bracket(x, r);
  return r;
}

Tensor FreeLie::dynkin(const Tensor& t) const {
  Tensor r;
  for (const auto& [w, x] : t) {
    if (w.empty()) continue;
    auto it = dynkin_cache_.find(w);
    if (it == dynkin_cache_.end()) {
      Tensor b = gen(static_cast<unsigned char>(w[0]));
      for (std::size_t i = 1; i < w.size(); ++i) b = bracket(b, gen(static_cast<unsigned char>(w[i])));
      it = dynkin_cache_.emplace(w, std::move(b)).first;
    }
    add_to(r, it->second, x);
  }
  return r;
}

bool FreeLie::dynkin_is_lie(const Tensor& t) const {
  for (int n = 0; n <= cap_; ++n) {
    Tensor p = length_part(t, n);
    if (p.empty()) continue;
    if (n == 0) return false;
    if (dynkin(p) != Rat(n) * p) return false;
  }
  return true;
}

bool FreeLie::is_lie(const Tensor& t) const {
  std::map<int, Tensor> by_deg;
  for (const auto& [w, x] : t) {
    if (w.empty() || static_cast<int>(w.size()) > cap_) return false;
    by_deg[word_degree(w)].emplace(w, x);
  }
  for (const auto& [d, part] : by_deg)
    for (int n = 1; n <= cap_; ++n) {
      Tensor p = length_part(part, n);
      if (!p.empty() && !block(d, n).ech.contains(p)) return false;
    }
  return true;
}

const FreeLie::Block& FreeLie::block(int degree, int length) const {
  auto key = std::make_pair(degree, length);
  auto it = blocks_.find(key);
  if (it != blocks_.end()) return it->second;
  Block blk;
  if (length >= 1 && length <= cap_ && !gens_.empty()) {
    std::vector<int> seq;
    std::size_t visited = 0;
    std::function<void(int, int)> rec = [&](int rem_len, int rem_deg) {
      if (rem_len == 0) {
        if (rem_deg != 0) return;
        if (++visited > resource_limit() * 4)
          throw Error(ErrorKind::Resource, "Lie basis enumeration in degree " +
                                               std::to_string(degree) + ", length " +
                                               std::to_string(length));
        Tensor r = gen(seq.back());
        std::string label = gens_[seq.back()].name;
        for (int i = static_cast<int>(seq.size()) - 2; i >= 0; --i) {
          r = bracket(gen(seq[i]), r);
          label = "[" + gens_[seq[i]].name + ", " + label + "]";
        }
        if (blk.ech.insert(r) >= 0) {
          blk.elems.push_back(std::move(r));
          blk.labels.push_back(std::move(label));
        }
        return;
      }
      if (rem_deg < min_deg_ * rem_len || rem_deg > max_deg_ * rem_len) return;
      for (int g = 0; g < ngens(); ++g) {
        seq.push_back(g);
        rec(rem_len - 1, rem_deg - gens_[g].degree);
        seq.pop_back();
      }
    };
    rec(length, degree);
  }
  return blocks_.emplace(key, std::move(blk)).first->second;
}

std::vector<Tensor> FreeLie::lie_basis(int degree, int length) const {
  return block(degree, length).elems;
}

int FreeLie::dim(int degree) const {
  int n = 0;
  for (int l = 1; l <= cap_; ++l) n += static_cast<int>(block(degree, l).elems.size());
  return n;
}

std::vector<Tensor> FreeLie::basis(int degree) const {
  std::vector<Tensor> r;
  for (int l = 1; l <= cap_; ++l) {
    const auto& b = block(degree, l).elems;
    r.insert(r.end(), b.begin(), b.end());
  }
  check_resource(r.size(), "Lie algebra in degree " + std::to_string(degree));
  return r;
}

std::vector<std::string> FreeLie::basis_labels(int degree) const {
  std::vector<std::string> r;
  for (int l = 1; l <= cap_; ++l) {
    const auto& b = block(degree, l).labels;
    r.insert(r.end(), b.begin(), b.end());
  }
  return r;
}

SparseVec FreeLie::coordinates(const Tensor& e, int degree) const {
  SparseVec out;
  std::map<int, Tensor> parts;
  for (const auto& [w, x] : e) {
    if (word_degree(w) != degree)
      throw Error(ErrorKind::Degree, "element has a term of degree " +
                                         std::to_string(word_degree(w)) + ", expected " +
                                         std::to_string(degree));
    if (w.empty() || static_cast<int>(w.size()) > cap_)
      throw Error(ErrorKind::NotInSpan, "element has a word outside lengths 1.." + std::to_string(cap_));
    parts[static_cast<int>(w.size())].emplace(w, x);
  }
  int offset = 0;
  for (int l = 1; l <= cap_; ++l) {
    const Block& b = block(degree, l);
    auto it = parts.find(l);
    if (it != parts.end()) {
      auto co = b.ech.coordinates(it->second);
      if (!co) throw Error(ErrorKind::NotInSpan, "element is not a Lie element in length " + std::to_string(l));
      for (const auto& [k, v] : *co) out.emplace(offset + k, v);
    }
    offset += static_cast<int>(b.elems.size());
  }
  return out;
}

Tensor FreeLie::from_coordinates(const SparseVec& v, int degree) const {
  Tensor r;
  int offset = 0;
  for (int l = 1; l <= cap_; ++l) {
    const Block& b = block(degree, l);
    int n = static_cast<int>(b.elems.size());
    for (auto it = v.lower_bound(offset); it != v.end() && it->first < offset + n; ++it)
      add_to(r, b.elems[it->first - offset], it->second);
    offset += n;
  }
  return r;
}

std::pair<int, int> FreeLie::degree_span() const {
  if (gens_.empty()) return {0, -1};
  int lo = std::min(min_deg_, min_deg_ * cap_);
  int hi = std::max(max_deg_, max_deg_ * cap_);
  return {lo, hi};
}

namespace {

void append_term(std::string& s, const Rat& c, const std::string& label) {
  Rat a = abs(c);
  if (s.empty()) {
    if (c < 0) s += "-";
  } else {
    s += (c < 0) ? " - " : " + ";
  }
  if (a != 1) s += to_string(a) + " * ";
  s += label;
}

}  // namespace

std::string FreeLie::format(const Tensor& e) const {
  if (e.empty()) return "0";
  std::map<int, Tensor> by_deg;
  for (const auto& [w, x] : e) by_deg[word_degree(w)].emplace(w, x);
  std::string s;
  for (const auto& [d, part] : by_deg) {
    bool lie = true;
    SparseVec co;
    try {
      co = coordinates(part, d);
    } catch (const Error&) {
      lie = false;
    }
    if (lie) {
      auto labels = basis_labels(d);
      for (const auto& [k, v] : co) append_term(s, v, labels[k]);
    } else {
      for (const auto& [w, x] : part) {
        std::string lab;
        for (char c : w) lab += (lab.empty() ? "" : "*") + gens_[static_cast<unsigned char>(c)].name;
        if (lab.empty()) lab = "1";
        append_term(s, x, lab);
      }
    }
  }
  return s;
}

}  // namespace cdgl
