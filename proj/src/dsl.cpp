#include "cdgl/dsl.hpp"

#include <cctype>
#include <set>

namespace cdgl {

std::string Diagnostic::str() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + severity + ": " + message;
}

bool Expr::operator==(const Expr& o) const {
  return kind == o.kind && num == o.num && name == o.name && power == o.power && kids == o.kids;
}

bool Stmt::operator==(const Stmt& o) const {
  return kind == o.kind && names == o.names && value == o.value && has_expr == o.has_expr &&
         (!has_expr || expr == o.expr) && levels == o.levels && bindings == o.bindings;
}

bool ModelAst::operator==(const ModelAst& o) const {
  return name == o.name && is_builtin == o.is_builtin && builtin == o.builtin &&
         params == o.params && body == o.body;
}

bool MapAst::operator==(const MapAst& o) const {
  return homotopy == o.homotopy && name == o.name && from == o.from && to == o.to &&
         bindings == o.bindings;
}

bool Document::operator==(const Document& o) const {
  return models == o.models && maps == o.maps && order == o.order;
}

bool ParseResult::ok() const {
  for (const auto& d : diagnostics)
    if (d.severity == "error") return false;
  return true;
}

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

std::vector<Token> lex(const std::string& s, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k) {
      unsigned char c = s[i];
      if (c == '\n') {
        ++line;
        col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    Pos p{line, col};
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), p});
      advance(j - i);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, s.substr(i, j - i), p});
      advance(j - i);
      continue;
    }
    if (s.compare(i, 2, "->") == 0 || s.compare(i, 2, "..") == 0) {
      out.push_back({Tok::Sym, s.substr(i, 2), p});
      advance(2);
      continue;
    }
    if (std::string("{}[](),:=+-*/^|~").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), p});
      advance(1);
      continue;
    }
    std::size_t n = 1;
    if (c >= 0xC0) {
      while (i + n < s.size() && (static_cast<unsigned char>(s[i + n]) & 0xC0) == 0x80) ++n;
    }
    diags.push_back({p, "error", "unexpected character '" + s.substr(i, n) + "'"});
    advance(n);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

struct SyntaxError {
  Pos pos;
  std::string msg;
};

const std::set<std::string> kStmtKeywords = {"truncate", "gen", "d", "mc", "filtration", "derivation"};
const std::set<std::string> kTopKeywords = {"model", "morphism", "homotopy"};
const std::set<std::string> kReserved = {"truncate", "gen", "d", "mc", "filtration", "derivation",
                                         "model", "morphism", "homotopy", "t", "dt", "expad"};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags) : t_(std::move(toks)), diags_(diags) {}

  Document document() {
    Document d;
    while (peek().kind != Tok::End) {
      try {
        const Token& k = peek();
        if (is_ident("model")) {
          d.order.push_back({0, static_cast<int>(d.models.size())});
          d.models.push_back(model());
        } else if (is_ident("morphism") || is_ident("homotopy")) {
          d.order.push_back({1, static_cast<int>(d.maps.size())});
          d.maps.push_back(map_decl());
        } else {
          throw SyntaxError{k.pos, "expected 'model', 'morphism' or 'homotopy', found " + describe(k)};
        }
      } catch (const SyntaxError& e) {
        diags_.push_back({e.pos, "error", e.msg});
        sync_top();
      }
    }
    return d;
  }

  Expr expression_only() {
    Expr e = expr();
    if (peek().kind != Tok::End) throw SyntaxError{peek().pos, "unexpected " + describe(peek()) + " after expression"};
    return e;
  }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
  std::vector<Diagnostic>& diags_;

  const Token& peek(int k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  const Token& next() {
    const Token& tk = t_[i_];
    if (i_ + 1 < t_.size()) ++i_;
    return tk;
  }
  bool is_sym(const char* s, int k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_ident(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }
  void expect_sym(const char* s) {
    if (!is_sym(s)) throw SyntaxError{peek().pos, std::string("expected '") + s + "', found " + describe(peek())};
    next();
  }
  std::string ident(const char* what, Pos* pos = nullptr) {
    const Token& tk = peek();
    if (tk.kind != Tok::Ident) throw SyntaxError{tk.pos, std::string("expected ") + what + ", found " + describe(tk)};
    if (kReserved.count(tk.text)) throw SyntaxError{tk.pos, "'" + tk.text + "' is a reserved word"};
    if (pos) *pos = tk.pos;
    return next().text;
  }
  int integer(bool allow_sign) {
    int sign = 1;
    if (allow_sign && is_sym("-")) {
      next();
      sign = -1;
    }
    const Token& tk = peek();
    if (tk.kind != Tok::Int) throw SyntaxError{tk.pos, "expected integer, found " + describe(tk)};
    if (tk.text.size() > 9) throw SyntaxError{tk.pos, "integer out of range"};
    next();
    return sign * std::stoi(tk.text);
  }

  void sync_top() {
    int depth = 0;
    while (peek().kind != Tok::End) {
      if (depth <= 0 && peek().kind == Tok::Ident && kTopKeywords.count(peek().text)) return;
      if (is_sym("{")) ++depth;
      else if (is_sym("}")) --depth;
      next();
    }
  }

  void sync_stmt(std::size_t start) {
    int depth = 0;
    bool moved = i_ > start;
    while (peek().kind != Tok::End) {
      if (depth == 0 && moved && peek().kind == Tok::Ident &&
          (kStmtKeywords.count(peek().text) || kTopKeywords.count(peek().text)))
        return;
      if (is_sym("{")) ++depth;
      if (is_sym("}")) {
        if (depth == 0) return;
        --depth;
      }
      next();
      moved = true;
    }
  }

  ModelAst model() {
    ModelAst m;
    m.pos = next().pos;
    m.name = ident("model name");
    if (is_sym("=")) {
      next();
      m.is_builtin = true;
      const Token& tk = peek();
      if (tk.kind != Tok::Ident) throw SyntaxError{tk.pos, "expected builtin model name, found " + describe(tk)};
      m.builtin = next().text;
      if (is_sym("(")) {
        next();
        if (!is_sym(")")) {
          m.params.push_back(integer(true));
          while (is_sym(",")) {
            next();
            m.params.push_back(integer(true));
          }
        }
        expect_sym(")");
      }
      return m;
    }
    expect_sym("{");
    while (!is_sym("}")) {
      if (peek().kind == Tok::End) throw SyntaxError{peek().pos, "unterminated model block, expected '}'"};
      if (peek().kind == Tok::Ident && kTopKeywords.count(peek().text))
        throw SyntaxError{peek().pos, "expected '}' before " + describe(peek())};
      std::size_t start = i_;
      try {
        m.body.push_back(stmt());
      } catch (const SyntaxError& e) {
        diags_.push_back({e.pos, "error", e.msg});
        sync_stmt(start);
      }
    }
    next();
    return m;
  }

  std::vector<Binding> bindings() {
    std::vector<Binding> r;
    expect_sym("{");
    if (!is_sym("}")) {
      for (;;) {
        Binding b;
        b.name = ident("generator name", &b.pos);
        expect_sym("->");
        b.value = expr();
        r.push_back(std::move(b));
        if (!is_sym(",")) break;
        next();
      }
    }
    expect_sym("}");
    return r;
  }

  Stmt stmt() {
    Stmt s;
    const Token& kw = peek();
    s.pos = kw.pos;
    if (kw.kind != Tok::Ident || !kStmtKeywords.count(kw.text))
      throw SyntaxError{kw.pos, "expected a declaration (truncate, gen, d, mc, filtration, derivation), found " +
                                    describe(kw)};
    std::string k = next().text;
    Pos p;
    if (k == "truncate") {
      s.kind = Stmt::Kind::Truncate;
      s.value = integer(false);
    } else if (k == "gen") {
      s.kind = Stmt::Kind::Gen;
      s.names.push_back(ident("generator name", &p));
      s.name_pos.push_back(p);
      while (is_sym(",")) {
        next();
        s.names.push_back(ident("generator name", &p));
        s.name_pos.push_back(p);
      }
      expect_sym(":");
      s.value = integer(true);
    } else if (k == "d") {
      s.kind = Stmt::Kind::Diff;
      s.names.push_back(ident("generator name", &p));
      s.name_pos.push_back(p);
      expect_sym("=");
      s.has_expr = true;
      s.expr = expr();
    } else if (k == "mc") {
      s.kind = Stmt::Kind::MC;
      s.names.push_back(ident("name", &p));
      s.name_pos.push_back(p);
      if (is_sym("=")) {
        next();
        s.has_expr = true;
        s.expr = expr();
      }
    } else if (k == "filtration") {
      s.kind = Stmt::Kind::Filtration;
      s.names.push_back(ident("filtration name", &p));
      s.name_pos.push_back(p);
      expect_sym("{");
      s.levels.emplace_back();
      while (!is_sym("}")) {
        if (is_sym("|")) {
          next();
          s.levels.emplace_back();
          continue;
        }
        s.levels.back().push_back(ident("generator name", &p));
        s.name_pos.push_back(p);
        if (is_sym(",")) next();
        else if (!is_sym("|") && !is_sym("}"))
          throw SyntaxError{peek().pos, "expected ',', '|' or '}', found " + describe(peek())};
      }
      next();
    } else {
      s.kind = Stmt::Kind::Derivation;
      s.names.push_back(ident("derivation name", &p));
      s.name_pos.push_back(p);
      s.bindings = bindings();
    }
    return s;
  }

  MapAst map_decl() {
    MapAst m;
    m.homotopy = peek().text == "homotopy";
    m.pos = next().pos;
    m.name = ident(m.homotopy ? "homotopy name" : "morphism name");
    expect_sym(":");
    m.from = ident(m.homotopy ? "morphism name" : "model name", &m.from_pos);
    expect_sym(m.homotopy ? "~" : "->");
    m.to = ident(m.homotopy ? "morphism name" : "model name", &m.to_pos);
    m.bindings = bindings();
    return m;
  }

  Expr expr() {
    Pos p = peek().pos;
    Expr first = term();
    if (!is_sym("+") && !is_sym("-")) return first;
    Expr s;
    s.kind = Expr::Kind::Sum;
    s.pos = p;
    s.kids.push_back(std::move(first));
    while (is_sym("+") || is_sym("-")) {
      bool minus = next().text == "-";
      Pos q = peek().pos;
      Expr t = term();
      if (minus) {
        Expr n;
        n.kind = Expr::Kind::Neg;
        n.pos = q;
        n.kids.push_back(std::move(t));
        s.kids.push_back(std::move(n));
      } else {
        s.kids.push_back(std::move(t));
      }
    }
    return s;
  }

  Expr term() {
    Pos p = peek().pos;
    if (is_sym("-")) {
      next();
      Expr n;
      n.kind = Expr::Kind::Neg;
      n.pos = p;
      n.kids.push_back(term());
      return n;
    }
    Expr f = factor();
    if (!is_sym("*")) return f;
    Expr pr;
    pr.kind = Expr::Kind::Prod;
    pr.pos = p;
    pr.kids.push_back(std::move(f));
    while (is_sym("*")) {
      next();
      pr.kids.push_back(factor());
    }
    return pr;
  }

  Expr factor() {
    const Token& tk = peek();
    Expr e;
    e.pos = tk.pos;
    if (tk.kind == Tok::Int) {
      e.kind = Expr::Kind::Num;
      Int num(next().text);
      Int den(1);
      if (is_sym("/")) {
        next();
        const Token& dk = peek();
        if (dk.kind != Tok::Int) throw SyntaxError{dk.pos, "expected denominator, found " + describe(dk)};
        den = Int(next().text);
        if (den == 0) throw SyntaxError{dk.pos, "zero denominator"};
      }
      e.num = Rat(num, den);
      e.num.canonicalize();
      return e;
    }
    if (is_sym("(")) {
      next();
      Expr inner = expr();
      expect_sym(")");
      return inner;
    }
    if (is_sym("[")) {
      next();
      e.kind = Expr::Kind::Bracket;
      e.kids.push_back(expr());
      expect_sym(",");
      e.kids.push_back(expr());
      expect_sym("]");
      return e;
    }
    if (tk.kind == Tok::Ident) {
      if (tk.text == "expad") {
        next();
        e.kind = Expr::Kind::ExpAd;
        expect_sym("(");
        e.kids.push_back(expr());
        expect_sym(",");
        e.kids.push_back(expr());
        expect_sym(")");
        return e;
      }
      if (tk.text == "t") {
        next();
        e.kind = Expr::Kind::T;
        if (is_sym("^")) {
          next();
          e.power = integer(false);
        }
        return e;
      }
      if (tk.text == "dt") {
        next();
        e.kind = Expr::Kind::DT;
        return e;
      }
      if (kReserved.count(tk.text)) throw SyntaxError{tk.pos, "'" + tk.text + "' is a reserved word"};
      e.kind = Expr::Kind::Gen;
      e.name = next().text;
      return e;
    }
    throw SyntaxError{tk.pos, "expected expression, found " + describe(tk)};
  }
};

std::string print_rat(const Rat& r) { return to_string(r); }

std::string print_factor(const Expr& e) {
  if (e.kind == Expr::Kind::Sum || e.kind == Expr::Kind::Neg || e.kind == Expr::Kind::Prod ||
      (e.kind == Expr::Kind::Num && e.num < 0))
    return "(" + print_expr(e) + ")";
  return print_expr(e);
}

std::string print_term(const Expr& e) {
  if (e.kind == Expr::Kind::Sum) return "(" + print_expr(e) + ")";
  return print_expr(e);
}

std::string print_bindings(const std::vector<Binding>& bs) {
  if (bs.empty()) return "{ }";
  std::string s = "{ ";
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i) s += ", ";
    s += bs[i].name + " -> " + print_expr(bs[i].value);
  }
  return s + " }";
}

}  // namespace

ParseResult parse_document(const std::string& text) {
  ParseResult r;
  auto toks = lex(text, r.diagnostics);
  Parser p(std::move(toks), r.diagnostics);
  r.doc = p.document();
  return r;
}

ParseResult parse_expression(const std::string& text, Expr* out) {
  ParseResult r;
  auto toks = lex(text, r.diagnostics);
  Parser p(std::move(toks), r.diagnostics);
  try {
    *out = p.expression_only();
  } catch (const SyntaxError& e) {
    r.diagnostics.push_back({e.pos, "error", e.msg});
  }
  return r;
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Num:
      return print_rat(e.num);
    case Expr::Kind::Gen:
      return e.name;
    case Expr::Kind::T:
      return e.power == 1 ? "t" : "t^" + std::to_string(e.power);
    case Expr::Kind::DT:
      return "dt";
    case Expr::Kind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        const Expr& k = e.kids[i];
        if (i == 0) s += print_term(k);
        else if (k.kind == Expr::Kind::Neg) s += " - " + print_term(k.kids[0]);
        else s += " + " + print_term(k);
      }
      return s;
    }
    case Expr::Kind::Prod: {
      std::string s;
      for (std::size_t i = 0; i < e.kids.size(); ++i) s += (i ? " * " : "") + print_factor(e.kids[i]);
      return s;
    }
    case Expr::Kind::Neg:
      return "-" + print_term(e.kids[0]);
    case Expr::Kind::Bracket:
      return "[" + print_expr(e.kids[0]) + ", " + print_expr(e.kids[1]) + "]";
    case Expr::Kind::ExpAd:
      return "expad(" + print_expr(e.kids[0]) + ", " + print_expr(e.kids[1]) + ")";
  }
  return "";
}

std::string print_document(const Document& d) {
  std::string out;
  for (const auto& [kind, idx] : d.order) {
    if (!out.empty()) out += "\n";
    if (kind == 0) {
      const ModelAst& m = d.models[idx];
      if (m.is_builtin) {
        out += "model " + m.name + " = " + m.builtin;
        if (!m.params.empty()) {
          out += "(";
          for (std::size_t i = 0; i < m.params.size(); ++i) out += (i ? ", " : "") + std::to_string(m.params[i]);
          out += ")";
        }
        out += "\n";
        continue;
      }
      out += "model " + m.name + " {\n";
      for (const auto& s : m.body) {
        out += "  ";
        switch (s.kind) {
          case Stmt::Kind::Truncate:
            out += "truncate " + std::to_string(s.value);
            break;
          case Stmt::Kind::Gen: {
            out += "gen ";
            for (std::size_t i = 0; i < s.names.size(); ++i) out += (i ? ", " : "") + s.names[i];
            out += " : " + std::to_string(s.value);
            break;
          }
          case Stmt::Kind::Diff:
            out += "d " + s.names[0] + " = " + print_expr(s.expr);
            break;
          case Stmt::Kind::MC:
            out += "mc " + s.names[0];
            if (s.has_expr) out += " = " + print_expr(s.expr);
            break;
          case Stmt::Kind::Filtration: {
            out += "filtration " + s.names[0] + " {";
            for (std::size_t l = 0; l < s.levels.size(); ++l) {
              out += l ? " |" : "";
              for (std::size_t i = 0; i < s.levels[l].size(); ++i) out += (i ? ", " : " ") + s.levels[l][i];
            }
            out += " }";
            break;
          }
          case Stmt::Kind::Derivation:
            out += "derivation " + s.names[0] + " " + print_bindings(s.bindings);
            break;
        }
        out += "\n";
      }
      out += "}\n";
    } else {
      const MapAst& m = d.maps[idx];
      out += std::string(m.homotopy ? "homotopy " : "morphism ") + m.name + " : " + m.from +
             (m.homotopy ? " ~ " : " -> ") + m.to + " " + print_bindings(m.bindings) + "\n";
    }
  }
  return out;
}

}  // namespace cdgl
