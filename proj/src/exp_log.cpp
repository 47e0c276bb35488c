#include "cdgl/exp_log.hpp"

#include <algorithm>

#include "cdgl/bch.hpp"

namespace cdgl {

void GeneratorFiltration::validate(const FreeLie& lie) const {
  if (levels.empty()) throw Error(ErrorKind::Usage, "filtration " + name + " is empty");
  if (static_cast<int>(levels[0].size()) != lie.ngens())
    throw Error(ErrorKind::Usage, "filtration " + name + " must start with all generators");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].empty()) throw Error(ErrorKind::Usage, "filtration " + name + " has an empty level");
    if (i > 0) {
      if (levels[i].size() >= levels[i - 1].size())
        throw Error(ErrorKind::Usage, "filtration " + name + " is not strictly descending");
      for (int g : levels[i])
        if (!contains(static_cast<int>(i) - 1, g))
          throw Error(ErrorKind::Usage, "filtration " + name + " is not nested");
    }
  }
}

bool GeneratorFiltration::contains(int level, int gen) const {
  if (level < 0) return true;
  if (level >= static_cast<int>(levels.size())) return false;
  return std::find(levels[level].begin(), levels[level].end(), gen) != levels[level].end();
}

int GeneratorFiltration::level_of(int gen) const {
  int l = -1;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (contains(static_cast<int>(i), gen)) l = static_cast<int>(i);
  return l;
}

SparseMat linear_part(const FreeLie& lie, const std::vector<Tensor>& values) {
  SparseMat m(lie.ngens(), lie.ngens());
  for (int g = 0; g < lie.ngens(); ++g)
    for (const auto& [w, c] : values[g])
      if (w.size() == 1) m.set(static_cast<unsigned char>(w[0]), g, c);
  return m;
}

bool is_nilpotent(const SparseMat& m) {
  SparseMat p = m;
  for (int i = 1; i < std::max(1, m.rows()); ++i) p = p * m;
  return p.is_zero();
}

bool raises_filtration(const FreeLie& lie, const std::vector<Tensor>& values,
                       const GeneratorFiltration& f) {
  for (int g = 0; g < lie.ngens(); ++g) {
    int lvl = f.level_of(g);
    for (const auto& [w, c] : values[g])
      if (w.size() == 1 && !f.contains(lvl + 1, static_cast<unsigned char>(w[0]))) return false;
  }
  return true;
}

namespace {

void check_convergent(const FreeLie& lie, const std::vector<Tensor>& values,
                      const GeneratorFiltration* f, const char* what) {
  if (f) {
    f->validate(lie);
    if (!raises_filtration(lie, values, *f))
      throw Error(ErrorKind::Divergence, std::string(what) + " does not raise filtration " + f->name);
  } else if (!is_nilpotent(linear_part(lie, values))) {
    throw Error(ErrorKind::Divergence,
                std::string(what) + " has non-nilpotent linear part; the series does not terminate");
  }
}

int iteration_bound(const FreeLie& lie) { return (lie.ngens() + 1) * (lie.cap() + 1) + 1; }

}  // namespace

std::vector<Tensor> exp_derivation(const FreeLie& lie, const Derivation& th,
                                   const GeneratorFiltration* f) {
  if (th.degree != 0) throw Error(ErrorKind::Degree, "exponential needs a degree 0 derivation");
  check_convergent(lie, th.values, f, "derivation");
  std::vector<Tensor> out;
  for (int g = 0; g < lie.ngens(); ++g) {
    Tensor r = lie.gen(g), term = lie.gen(g);
    for (int k = 1;; ++k) {
      term = Rat(1, k) * apply_derivation(lie, lie, th.values, 0, term);
      if (term.empty()) break;
      if (k > iteration_bound(lie)) throw Error(ErrorKind::Divergence, "exponential series does not terminate");
      add_to(r, term);
    }
    out.push_back(std::move(r));
  }
  return out;
}

Derivation log_automorphism(const FreeLie& lie, const std::vector<Tensor>& images,
                            const GeneratorFiltration* f) {
  std::vector<Tensor> diff;
  for (int g = 0; g < lie.ngens(); ++g) {
    if (!lie.is_homogeneous(images[g], lie.gen_degree(g)))
      throw Error(ErrorKind::Degree, "automorphism image of " + lie.gens()[g].name + " has the wrong degree");
    diff.push_back(images[g] - lie.gen(g));
  }
  check_convergent(lie, diff, f, "automorphism minus identity");
  Derivation th;
  for (int g = 0; g < lie.ngens(); ++g) {
    Tensor r, pw = lie.gen(g);
    for (int n = 1;; ++n) {
      pw = apply_morphism(lie, images, pw) - pw;
      if (pw.empty()) break;
      if (n > iteration_bound(lie)) throw Error(ErrorKind::Divergence, "logarithm series does not terminate");
      add_to(r, pw, Rat(n % 2 == 1 ? 1 : -1, n));
    }
    th.values.push_back(std::move(r));
  }
  return th;
}

std::vector<Tensor> identity_images(const FreeLie& lie) {
  std::vector<Tensor> r;
  for (int g = 0; g < lie.ngens(); ++g) r.push_back(lie.gen(g));
  return r;
}

std::vector<Tensor> compose(const FreeLie& target, const std::vector<Tensor>& outer,
                            const std::vector<Tensor>& inner) {
  std::vector<Tensor> r;
  for (const auto& v : inner) r.push_back(apply_morphism(target, outer, v));
  return r;
}

std::vector<Tensor> exp_ad_images(const FreeLie& lie, const Tensor& y) {
  std::vector<Tensor> r;
  for (int g = 0; g < lie.ngens(); ++g) r.push_back(exp_ad(lie, y, lie.gen(g)));
  return r;
}

std::vector<Tensor> act_on_morphism(const DGL& target, const Tensor& y,
                                    const std::vector<Tensor>& phi) {
  const FreeLie& L = target.lie();
  auto deg = L.degree_of(y);
  if (deg && *deg != 0) throw Error(ErrorKind::Degree, "acting element must have degree 0");
  if (!target.d(y).empty()) throw Error(ErrorKind::Usage, "acting element is not a cycle");
  std::vector<Tensor> r;
  for (const auto& v : phi) r.push_back(exp_ad(L, y, v));
  return r;
}

}  // namespace cdgl
