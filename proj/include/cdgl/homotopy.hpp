#pragma once
#include <string>
#include <utility>
#include <vector>

#include "cdgl/dgl.hpp"

namespace cdgl {

// Key (k, has_dt) stands for t^k or t^k dt; |t| = 0 and |dt| = -1.
using PolyKey = std::pair<int, bool>;
using PolyForm = std::map<PolyKey, Tensor>;

void add_to(PolyForm& a, const PolyForm& b, const Rat& c = 1);
PolyForm scaled(const PolyForm& a, const Rat& c);
bool is_zero(const PolyForm& a);

// L (x) Lambda(t, dt), truncated in bracket length and polynomial degree.
class Cylinder {
 public:
  Cylinder(const DGL& l, int poly_cap);

  const DGL& dgl() const { return l_; }
  int poly_cap() const { return poly_cap_; }
  // Set when a term of polynomial degree above the cap was dropped.
  bool overflow() const { return overflow_; }
  void reset_overflow() { overflow_ = false; }

  PolyForm constant(const Tensor& x) const;
  PolyForm t_power(int k, bool dt) const;
  PolyForm mul(const PolyForm& a, const PolyForm& b) const;
  PolyForm bracket(const PolyForm& a, const PolyForm& b) const;
  PolyForm d(const PolyForm& a) const;
  // Multiplicative extension of generator images of a source dgl.
  PolyForm apply(const FreeLie& source, const std::vector<PolyForm>& images, const Tensor& x) const;

  std::optional<int> degree_of(const PolyForm& a) const;
  bool is_lie(const PolyForm& a) const;
  std::string format(const PolyForm& a) const;

 private:
  DGL l_;
  int poly_cap_;
  mutable bool overflow_ = false;
};

// Substitutes t = i and dt = 0.
Tensor eval_endpoint(const PolyForm& f, int i);
std::vector<Tensor> eval_endpoint(const std::vector<PolyForm>& w, int i);

struct HomotopyResult {
  bool ok = false;
  bool terminated = true;   // no term was dropped by the polynomial cap
  bool stable = true;       // same verdict at poly_cap + 1
  std::string generator;    // where the check failed
  std::string certificate;
};

HomotopyResult check_homotopy(const DGL& src, const DGL& tgt, const std::vector<PolyForm>& witness,
                              const std::vector<Tensor>& phi, const std::vector<Tensor>& psi,
                              int poly_cap);

}  // namespace cdgl
