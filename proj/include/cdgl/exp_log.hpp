#pragma once
#include <optional>

#include "cdgl/dgl.hpp"

namespace cdgl {

// V = V^0 ⊇ V^1 ⊇ ... ⊇ V^q = 0, each level a set of generator indices.
struct GeneratorFiltration {
  std::string name;
  std::vector<std::vector<int>> levels;
  // Throws Usage if not strictly descending from all generators.
  void validate(const FreeLie& lie) const;
  int level_of(int gen) const;
  bool contains(int level, int gen) const;
};

// Linear part of the degree 0 map generator -> value, as a matrix (rows: target generators).
SparseMat linear_part(const FreeLie& lie, const std::vector<Tensor>& values);
bool is_nilpotent(const SparseMat& m);
// Linear part of each value lies one filtration level higher.
bool raises_filtration(const FreeLie& lie, const std::vector<Tensor>& values,
                       const GeneratorFiltration& f);

// e^theta for a degree 0 derivation whose linear part is nilpotent (or raises f).
std::vector<Tensor> exp_derivation(const FreeLie& lie, const Derivation& th,
                                   const GeneratorFiltration* f = nullptr);
// Standard logarithm sum (-1)^{n+1} (f - id)^n / n of an automorphism with
// nilpotent linear part of f - id.
Derivation log_automorphism(const FreeLie& lie, const std::vector<Tensor>& images,
                            const GeneratorFiltration* f = nullptr);

std::vector<Tensor> identity_images(const FreeLie& lie);
std::vector<Tensor> compose(const FreeLie& target, const std::vector<Tensor>& outer,
                            const std::vector<Tensor>& inner);
std::vector<Tensor> exp_ad_images(const FreeLie& lie, const Tensor& y);

// [y].phi = e^{ad_y} o phi; y must be a degree 0 cycle of the target.
std::vector<Tensor> act_on_morphism(const DGL& target, const Tensor& y,
                                    const std::vector<Tensor>& phi);

}  // namespace cdgl
