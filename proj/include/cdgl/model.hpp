#pragma once
#include <optional>
#include <string>
#include <vector>

#include "cdgl/dsl.hpp"
#include "cdgl/exp_log.hpp"
#include "cdgl/homotopy.hpp"

namespace cdgl {

inline constexpr int kDefaultCap = 5;
inline constexpr int kDefaultPolyCap = 6;

struct Model {
  std::string name;
  DGL dgl;
  std::vector<std::pair<std::string, Tensor>> mcs;
  std::vector<GeneratorFiltration> filtrations;
  std::vector<std::pair<std::string, Derivation>> derivations;
  ModelAst ast;  // explicit presentation (builtins expanded)

  const Tensor* mc(const std::string& n) const;
  const GeneratorFiltration* filtration(const std::string& n) const;
  const Derivation* derivation(const std::string& n) const;
};

struct MorphismDef {
  std::string name, source, target;
  std::vector<Tensor> images;
};

struct HomotopyDef {
  std::string name, f, g;
  std::vector<PolyForm> witness;
};

struct ElabOptions {
  std::optional<int> cap;  // overrides truncate declarations
  int poly_cap = kDefaultPolyCap;
};

struct Workspace {
  std::vector<Model> models;
  std::vector<MorphismDef> morphisms;
  std::vector<HomotopyDef> homotopies;
  std::vector<Diagnostic> diagnostics;
  int poly_cap = kDefaultPolyCap;

  bool ok() const;
  const Model* model(const std::string& n) const;
  const MorphismDef* morphism(const std::string& n) const;
  const HomotopyDef* homotopy(const std::string& n) const;
};

Workspace elaborate(const Document& doc, const ElabOptions& opts = {});
Workspace load_model_text(const std::string& text, const ElabOptions& opts = {});

// Builtins: L0, L1, S1, sphere(n), wedge(n1, ..., nk).
bool is_builtin(const std::string& name);
// Explicit model block for a builtin at the given cap; throws Usage on bad names or parameters.
ModelAst builtin_ast(const std::string& name, const std::vector<int>& params, int cap,
                     const std::string& model_name = "");
Model builtin_model(const std::string& name, const std::vector<int>& params, int cap);
// "sphere(2)" -> ("sphere", {2}); throws Usage.
std::pair<std::string, std::vector<int>> parse_model_ref(const std::string& ref);

// Expression evaluation against a model; pushes diagnostics and returns nullopt on failure.
std::optional<Tensor> eval_lie(const Expr& e, const FreeLie& lie, std::optional<int> degree,
                               std::vector<Diagnostic>& diags);
std::optional<PolyForm> eval_form(const Expr& e, const Cylinder& cyl, std::optional<int> degree,
                                  std::vector<Diagnostic>& diags);

}  // namespace cdgl
