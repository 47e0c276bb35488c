#include "cdgl/bch.hpp"

namespace cdgl {

Tensor tensor_exp(const FreeLie& lie, const Tensor& x) {
  if (x.count(Word()))
    throw Error(ErrorKind::Divergence, "exponential of an element with a constant term");
  Tensor r = lie.one();
  Tensor term = lie.one();
  for (int k = 1; k <= lie.cap(); ++k) {
    term = Rat(1, k) * lie.mul(term, x);
    if (term.empty()) break;
    add_to(r, term);
  }
  return r;
}

Tensor tensor_log(const FreeLie& lie, const Tensor& g) {
  Tensor y = g;
  auto it = y.find(Word());
  if (it == y.end() || it->second != 1)
    throw Error(ErrorKind::Divergence, "logarithm of an element without unit constant term");
  y.erase(it);
  Tensor r;
  Tensor pw = lie.one();
  for (int k = 1; k <= lie.cap(); ++k) {
    pw = lie.mul(pw, y);
    if (pw.empty()) break;
    add_to(r, pw, Rat(k % 2 == 1 ? 1 : -1, k));
  }
  return r;
}

Tensor bch(const FreeLie& lie, const Tensor& x, const Tensor& y) {
  for (const Tensor* t : {&x, &y}) {
    auto d = lie.degree_of(*t);
    if (d && *d != 0)
      throw Error(ErrorKind::Degree, "BCH arguments must have degree 0");
  }
  Tensor r = tensor_log(lie, lie.mul(tensor_exp(lie, x), tensor_exp(lie, y)));
  if (!lie.is_lie(r)) throw Error(ErrorKind::Internal, "BCH result is not a Lie element");
  return r;
}

Tensor exp_ad(const FreeLie& lie, const Tensor& x, const Tensor& y) {
  Tensor r = y;
  Tensor term = y;
  for (int k = 1;; ++k) {
    term = Rat(1, k) * lie.bracket(x, term);
    if (term.empty()) break;
    if (k > lie.cap() + 1)
      throw Error(ErrorKind::Divergence, "ad-exponential does not terminate at the truncation");
    add_to(r, term);
  }
  return r;
}

}  // namespace cdgl
