#pragma once
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cdgl/chain_complex.hpp"
#include "cdgl/free_lie.hpp"

namespace cdgl {

using LiePtr = std::shared_ptr<const FreeLie>;

struct Derivation {
  int degree = 0;
  std::vector<Tensor> values;  // indexed by source generators
};

// Multiplicative extension of generator images to the tensor algebra.
Tensor apply_morphism(const FreeLie& target, const std::vector<Tensor>& images, const Tensor& x);

// Extension of generator values as a derivation of the given degree. With phi set,
// the extension is a phi-derivation into the target.
Tensor apply_derivation(const FreeLie& source, const FreeLie& target,
                        const std::vector<Tensor>& values, int degree, const Tensor& x,
                        const std::vector<Tensor>* phi = nullptr);

class DGL {
 public:
  DGL() = default;
  DGL(std::string name, LiePtr lie, std::vector<Tensor> d);

  const std::string& name() const { return name_; }
  const FreeLie& lie() const { return *lie_; }
  const LiePtr& lie_ptr() const { return lie_; }
  const std::vector<Tensor>& d_values() const { return d_; }
  int cap() const { return lie_->cap(); }
  Tensor d(const Tensor& x) const;
  // Throws IllFormedDifferential naming the generator and first bad length.
  void validate() const;

 private:
  std::string name_;
  LiePtr lie_;
  std::vector<Tensor> d_;
};

// Validating constructor for user-facing presentations.
DGL build_dgl(std::string name, std::vector<Generator> gens, std::vector<Tensor> d_on_gens,
              int cap);
// Builds a DGL from generators and a function producing differentials in the new algebra.
DGL make_dgl(std::string name, std::vector<Generator> gens, int cap,
             const std::function<std::vector<Tensor>(const FreeLie&)>& d_fn);

struct MCResult {
  bool ok = false;
  Tensor residue;
};
MCResult check_mc(const DGL& l, const Tensor& a);

// (L, d + ad_a); throws MCViolation if a is not MC.
DGL perturb(const DGL& l, const Tensor& a);

Derivation ad_derivation(const FreeLie& lie, const Tensor& x);

// Chain complex of the underlying (truncated) Lie algebra in degrees lo..hi.
GradedChainComplex lie_complex(const DGL& l, int lo, int hi);

// Checks phi d = d phi on generators; on failure fills why with the generator name.
bool is_dgl_morphism(const DGL& src, const DGL& tgt, const std::vector<Tensor>& images,
                     std::string* why = nullptr);

Meta truncation_meta(const DGL& l);

}  // namespace cdgl
