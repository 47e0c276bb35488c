#pragma once
#include <functional>
#include <optional>

#include "cdgl/convolution.hpp"
#include "cdgl/exp_log.hpp"
#include "cdgl/h0_group.hpp"

namespace cdgl {

// Complex of phi-derivations L' -> L (phi = identity gives Der L with its bracket).
class DerComplex {
 public:
  DerComplex(const DGL& src, const DGL& tgt, std::vector<Tensor> phi, bool identity);
  static DerComplex of(const DGL& l);

  const DGL& source() const { return src_; }
  const DGL& target() const { return tgt_; }
  bool identity() const { return identity_; }
  const std::vector<Tensor>& phi() const { return phi_; }

  int full_dim(int n) const;
  int dim(int n) const;
  std::vector<std::string> labels(int n) const;
  Derivation zero(int n) const;
  Derivation elem(int n, int i) const;
  Derivation from_full(int n, const SparseVec& v) const;
  SparseVec full_coords(const Derivation& th) const;
  // Coordinates in the (possibly restricted) basis of degree th.degree.
  SparseVec coords(const Derivation& th) const;

  Tensor apply(const Derivation& th, const Tensor& x) const;
  Derivation D(const Derivation& th) const;
  Derivation bracket(const Derivation& a, const Derivation& b) const;
  Derivation add(const Derivation& a, const Derivation& b, const Rat& s = 1) const;
  // ad_x o phi
  Derivation ad(const Tensor& x) const;
  bool is_zero(const Derivation& th) const;

  // Replace degree n by the span of the given derivations.
  void restrict_degree(int n, const std::vector<Derivation>& basis);
  void set_min_degree(int m) { min_degree_ = m; }

  GradedChainComplex complex(int lo, int hi) const;

 private:
  DGL src_, tgt_;
  std::vector<Tensor> phi_;
  bool identity_;
  std::optional<int> min_degree_;
  std::map<int, std::vector<SparseVec>> restricted_;
  std::map<int, std::shared_ptr<Echelon<int>>> restricted_ech_;
};

enum class Variant { DER_SL, L_DER, FDER_SL, HOM_DER };
const char* variant_name(Variant v);

struct TwistedComplex {
  Variant variant = Variant::DER_SL;
  GradedChainComplex total, sub, quotient;
  ChainMap inclusion, projection;
  // Bracket of basis vectors of the total complex (empty function when not available).
  std::function<SparseVec(int, const SparseVec&, int, const SparseVec&)> bracket;
};

// Der (x) sL with D(sx) = -s dx + ad_x o phi: DER_SL for identity, FDER_SL otherwise.
// The sub-complex is the derivation part and the quotient is sL.
TwistedComplex der_sl(const DerComplex& der, int lo, int hi);
// L x~ Der with [theta, x] = theta(x); sub-complex L, quotient Der.
TwistedComplex l_der(const DerComplex& der, int lo, int hi);

struct HomDer {
  GradedChainComplex total;
  std::vector<std::string> labels;      // combined basis over all degrees
  std::vector<int> degrees;
  std::vector<std::vector<SparseVec>> bracket;  // bracket[i][j] in combined indices
  bool all_differentials_zero = true;
};
// Der L x~ Hom(C(L), L) with [theta, f] = theta o f, over the whole finite basis.
HomDer hom_der(const DGL& l, int word_cap);

struct GSpec {
  enum class Kind { IDENTITY, STABILIZER, SPAN } kind = Kind::IDENTITY;
  GeneratorFiltration filtration;
  bool has_filtration = false;
  std::vector<Derivation> span;
  std::vector<std::string> span_names;
  std::string describe() const;
};

struct DerG0 {
  std::vector<Derivation> basis;
  std::vector<Derivation> r0;
  bool contains_r0 = true;
  bool closed = true;
  bool saturated = true;
  std::vector<std::string> notes;
};

// R0 = D(Der_1) + ad L_0 (or D(Der_1) alone for the pointed case).
std::vector<Derivation> r_zero(const DerComplex& der, bool pointed);
DerG0 der_g_zero(const DGL& l, const GSpec& spec, bool pointed);

struct LieQuotient {
  int dimension = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<SparseVec>> constants;
  bool abelian = true;
  int nilpotency_class = 0;
};

struct ClassifyingReport {
  std::map<int, HomologyReport> homology;         // H_n of the 1-connected cover, n >= 1
  std::map<int, std::vector<std::string>> reps;   // representatives as text
  int h0_der_dim = 0;
  int im_h0_ad_dim = 0;
  LieQuotient group;                              // G_Q (free) or pi_Q (pointed)
  std::map<int, int> total_homology;              // pointed: H_*(L x~ Der^Pi)
  int nilpotency_index = 0;
  bool nilpotency_window_limited = false;
  std::map<int, int> postnikov;                   // homology of the Postnikov stage
  DerG0 g0;
};

ClassifyingReport classifying_invariants(const DGL& l, const GSpec& spec, bool pointed, int lo,
                                         int hi);

struct MappingReport {
  std::map<int, int> pointed, free;
  int fiber_components = 0;
  LESData les;
};

MappingReport mapping_space_pi(const DGL& src, const DGL& tgt, const std::vector<Tensor>& phi,
                               int lo, int hi);

struct GammaReport {
  bool bijective = false;
  bool chain_map = false;
  bool bracket_compatible = false;
  int checked = 0;
  std::string failure;
  bool ok() const { return bijective && chain_map && bracket_compatible; }
};

GammaReport gamma_check(const DGL& src, const DGL& tgt, const std::vector<Tensor>& phi,
                        int word_cap);

}  // namespace cdgl
