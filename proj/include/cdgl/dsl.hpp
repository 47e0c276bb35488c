#pragma once
#include <string>
#include <vector>

#include "cdgl/rational.hpp"

namespace cdgl {

struct Pos {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  Pos pos;
  std::string severity;  // "error" or "warning"
  std::string message;
  std::string str() const;
};

struct Expr {
  enum class Kind { Num, Gen, T, DT, Sum, Prod, Neg, Bracket, ExpAd } kind = Kind::Num;
  Rat num;
  std::string name;
  int power = 1;
  std::vector<Expr> kids;
  Pos pos;
  // Positions are ignored.
  bool operator==(const Expr& o) const;
};

struct Binding {
  std::string name;
  Pos pos;
  Expr value;
  bool operator==(const Binding& o) const { return name == o.name && value == o.value; }
};

struct Stmt {
  enum class Kind { Truncate, Gen, Diff, MC, Filtration, Derivation } kind = Kind::Gen;
  Pos pos;
  std::vector<std::string> names;   // gen names, d/mc target, filtration/derivation name
  std::vector<Pos> name_pos;
  int value = 0;                    // truncate cap or generator degree
  bool has_expr = false;
  Expr expr;
  std::vector<std::vector<std::string>> levels;
  std::vector<Binding> bindings;
  bool operator==(const Stmt& o) const;
};

struct ModelAst {
  std::string name;
  Pos pos;
  bool is_builtin = false;
  std::string builtin;
  std::vector<int> params;
  std::vector<Stmt> body;
  bool operator==(const ModelAst& o) const;
};

struct MapAst {
  bool homotopy = false;
  std::string name, from, to;  // morphism: source/target models; homotopy: the two morphisms
  Pos pos, from_pos, to_pos;
  std::vector<Binding> bindings;
  bool operator==(const MapAst& o) const;
};

struct Document {
  std::vector<ModelAst> models;
  std::vector<MapAst> maps;
  // Declaration order: (0, i) model i, (1, i) map i.
  std::vector<std::pair<int, int>> order;
  bool operator==(const Document& o) const;
};

struct ParseResult {
  Document doc;
  std::vector<Diagnostic> diagnostics;
  bool ok() const;
};

ParseResult parse_document(const std::string& text);
// Parses a single expression (used for command-line arguments).
ParseResult parse_expression(const std::string& text, Expr* out);

std::string print_expr(const Expr& e);
std::string print_document(const Document& d);

}  // namespace cdgl
