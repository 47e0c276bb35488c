#include "cdgl/model.hpp"

#include <regex>
#include <set>

namespace cdgl {

const Tensor* Model::mc(const std::string& n) const {
  for (const auto& [k, v] : mcs)
    if (k == n) return &v;
  return nullptr;
}

const GeneratorFiltration* Model::filtration(const std::string& n) const {
  for (const auto& f : filtrations)
    if (f.name == n) return &f;
  return nullptr;
}

const Derivation* Model::derivation(const std::string& n) const {
  for (const auto& [k, v] : derivations)
    if (k == n) return &v;
  return nullptr;
}

bool Workspace::ok() const {
  for (const auto& d : diagnostics)
    if (d.severity == "error") return false;
  return true;
}

const Model* Workspace::model(const std::string& n) const {
  for (const auto& m : models)
    if (m.name == n) return &m;
  return nullptr;
}

const MorphismDef* Workspace::morphism(const std::string& n) const {
  for (const auto& m : morphisms)
    if (m.name == n) return &m;
  return nullptr;
}

const HomotopyDef* Workspace::homotopy(const std::string& n) const {
  for (const auto& h : homotopies)
    if (h.name == n) return &h;
  return nullptr;
}

namespace {

DGL zero_dgl(const LiePtr& lie) {
  return DGL("scratch", lie, std::vector<Tensor>(lie->ngens()));
}

std::optional<PolyForm> eval_rec(const Expr& e, const Cylinder& cyl, bool allow_t,
                                 std::vector<Diagnostic>& diags) {
  const FreeLie& L = cyl.dgl().lie();
  auto err = [&](const std::string& m) -> std::optional<PolyForm> {
    diags.push_back({e.pos, "error", m});
    return std::nullopt;
  };
  switch (e.kind) {
    case Expr::Kind::Num:
      return scaled(cyl.constant(L.one()), e.num);
    case Expr::Kind::Gen: {
      int i = L.index_of(e.name);
      if (i < 0) return err("unknown generator " + e.name);
      return cyl.constant(L.gen(i));
    }
    case Expr::Kind::T:
    case Expr::Kind::DT:
      if (!allow_t) return err("t and dt may only appear in homotopy witnesses");
      return cyl.t_power(e.kind == Expr::Kind::T ? e.power : 0, e.kind == Expr::Kind::DT);
    case Expr::Kind::Sum: {
      PolyForm acc;
      bool ok = true;
      for (const auto& k : e.kids) {
        auto v = eval_rec(k, cyl, allow_t, diags);
        if (!v) ok = false;
        else add_to(acc, *v);
      }
      if (!ok) return std::nullopt;
      return acc;
    }
    case Expr::Kind::Neg: {
      auto v = eval_rec(e.kids[0], cyl, allow_t, diags);
      if (!v) return std::nullopt;
      return scaled(*v, -1);
    }
    case Expr::Kind::Prod: {
      std::optional<PolyForm> acc;
      bool ok = true;
      for (const auto& k : e.kids) {
        auto v = eval_rec(k, cyl, allow_t, diags);
        if (!v) ok = false;
        else if (ok) acc = acc ? cyl.mul(*acc, *v) : *v;
      }
      if (!ok) return std::nullopt;
      return acc;
    }
    case Expr::Kind::Bracket: {
      auto a = eval_rec(e.kids[0], cyl, allow_t, diags);
      auto b = eval_rec(e.kids[1], cyl, allow_t, diags);
      if (!a || !b) return std::nullopt;
      try {
        cyl.degree_of(*a);
        cyl.degree_of(*b);
      } catch (const Error&) {
        return err("bracket arguments must be homogeneous");
      }
      return cyl.bracket(*a, *b);
    }
    case Expr::Kind::ExpAd: {
      auto u = eval_rec(e.kids[0], cyl, allow_t, diags);
      auto v = eval_rec(e.kids[1], cyl, allow_t, diags);
      if (!u || !v) return std::nullopt;
      std::optional<int> du;
      try {
        du = cyl.degree_of(*u);
        cyl.degree_of(*v);
      } catch (const Error&) {
        return err("expad arguments must be homogeneous");
      }
      if (du && *du != 0) return err("expad needs a degree 0 first argument");
      PolyForm acc = *v, term = *v;
      int bound = L.cap() + cyl.poly_cap() + 2;
      for (int k = 1; k <= bound; ++k) {
        term = scaled(cyl.bracket(*u, term), Rat(1, k));
        if (is_zero(term)) break;
        add_to(acc, term);
      }
      return acc;
    }
  }
  return err("bad expression");
}

bool check_degree(const Expr& e, const Cylinder& cyl, const PolyForm& v, std::optional<int> degree,
                  std::vector<Diagnostic>& diags) {
  std::optional<int> d;
  try {
    d = cyl.degree_of(v);
  } catch (const Error&) {
    diags.push_back({e.pos, "error", "expression is not homogeneous"});
    return false;
  }
  if (degree && d && *d != *degree) {
    diags.push_back({e.pos, "error", "degree mismatch: expression has degree " + std::to_string(*d) +
                                         ", expected " + std::to_string(*degree)});
    return false;
  }
  if (!cyl.is_lie(v)) {
    diags.push_back({e.pos, "error", "expression is not a Lie element"});
    return false;
  }
  return true;
}

}  // namespace

std::optional<Tensor> eval_lie(const Expr& e, const FreeLie& lie, std::optional<int> degree,
                               std::vector<Diagnostic>& diags) {
  auto ptr = std::make_shared<const FreeLie>(lie);
  Cylinder cyl(zero_dgl(ptr), 0);
  auto v = eval_rec(e, cyl, false, diags);
  if (!v) return std::nullopt;
  if (!check_degree(e, cyl, *v, degree, diags)) return std::nullopt;
  auto it = v->find({0, false});
  return it == v->end() ? Tensor{} : it->second;
}

std::optional<PolyForm> eval_form(const Expr& e, const Cylinder& cyl, std::optional<int> degree,
                                  std::vector<Diagnostic>& diags) {
  auto v = eval_rec(e, cyl, true, diags);
  if (!v) return std::nullopt;
  if (!check_degree(e, cyl, *v, degree, diags)) return std::nullopt;
  return v;
}

namespace {

std::vector<std::string> generator_names(const std::vector<int>& dims) {
  bool circles = !dims.empty();
  for (int d : dims) circles = circles && d == 1;
  std::vector<std::string> pool = circles ? std::vector<std::string>{"u", "v", "w", "p", "q", "r", "s"}
                                          : std::vector<std::string>{"x", "y", "z", "w", "p", "q", "r", "s"};
  std::vector<std::string> r;
  for (std::size_t i = 0; i < dims.size(); ++i)
    r.push_back(dims.size() <= pool.size() ? pool[i] : pool[0] + std::to_string(i + 1));
  return r;
}

Expr gen_expr(const std::string& n) {
  Expr e;
  e.kind = Expr::Kind::Gen;
  e.name = n;
  return e;
}

Expr bracket_expr(Expr a, Expr b) {
  Expr e;
  e.kind = Expr::Kind::Bracket;
  e.kids = {std::move(a), std::move(b)};
  return e;
}

Expr prod_expr(const Rat& c, Expr x) {
  if (c == 1) return x;
  Expr num;
  num.kind = Expr::Kind::Num;
  num.num = abs(c);
  Expr p;
  p.kind = Expr::Kind::Prod;
  p.kids = {num, std::move(x)};
  if (c > 0) return p;
  Expr n;
  n.kind = Expr::Kind::Neg;
  n.kids.push_back(std::move(p));
  return n;
}

Expr sum_expr(std::vector<Expr> kids) {
  if (kids.size() == 1) return kids[0];
  Expr s;
  s.kind = Expr::Kind::Sum;
  s.kids = std::move(kids);
  return s;
}

Stmt gen_stmt(std::vector<std::string> names, int deg) {
  Stmt s;
  s.kind = Stmt::Kind::Gen;
  s.names = std::move(names);
  s.value = deg;
  return s;
}

Stmt diff_stmt(const std::string& g, Expr e) {
  Stmt s;
  s.kind = Stmt::Kind::Diff;
  s.names = {g};
  s.has_expr = true;
  s.expr = std::move(e);
  return s;
}

Stmt mc_stmt(const std::string& g) {
  Stmt s;
  s.kind = Stmt::Kind::MC;
  s.names = {g};
  return s;
}

Expr half_square(const std::string& g) {
  return prod_expr(Rat(-1, 2), bracket_expr(gen_expr(g), gen_expr(g)));
}

}  // namespace

bool is_builtin(const std::string& name) {
  return name == "L0" || name == "L1" || name == "S1" || name == "sphere" || name == "wedge";
}

ModelAst builtin_ast(const std::string& name, const std::vector<int>& params, int cap,
                     const std::string& model_name) {
  ModelAst m;
  m.name = model_name.empty() ? name : model_name;
  Stmt tr;
  tr.kind = Stmt::Kind::Truncate;
  tr.value = cap;
  m.body.push_back(tr);
  auto no_params = [&] {
    if (!params.empty()) throw Error(ErrorKind::Usage, "builtin " + name + " takes no parameters");
  };
  if (name == "L0") {
    no_params();
    m.body.push_back(gen_stmt({"a"}, -1));
    m.body.push_back(diff_stmt("a", half_square("a")));
    m.body.push_back(mc_stmt("a"));
  } else if (name == "L1") {
    no_params();
    m.body.push_back(gen_stmt({"a", "b"}, -1));
    m.body.push_back(gen_stmt({"x"}, 0));
    m.body.push_back(diff_stmt("a", half_square("a")));
    m.body.push_back(diff_stmt("b", half_square("b")));
    // dx = [x, b] + sum_n B_n / n! ad_x^n (b - a)
    std::vector<Expr> terms{bracket_expr(gen_expr("x"), gen_expr("b"))};
    Expr ba;
    ba.kind = Expr::Kind::Sum;
    Expr na;
    na.kind = Expr::Kind::Neg;
    na.kids.push_back(gen_expr("a"));
    ba.kids = {gen_expr("b"), na};
    Expr cur = ba;
    for (int n = 0; n + 1 <= cap; ++n) {
      Rat c = bernoulli(n) / Rat(factorial(n));
      if (c != 0) terms.push_back(prod_expr(c, cur));
      cur = bracket_expr(gen_expr("x"), cur);
    }
    m.body.push_back(diff_stmt("x", sum_expr(terms)));
    m.body.push_back(mc_stmt("a"));
    m.body.push_back(mc_stmt("b"));
  } else if (name == "S1") {
    no_params();
    m.body.push_back(gen_stmt({"b"}, -1));
    m.body.push_back(gen_stmt({"x"}, 0));
    m.body.push_back(diff_stmt("b", half_square("b")));
    m.body.push_back(diff_stmt("x", bracket_expr(gen_expr("x"), gen_expr("b"))));
    m.body.push_back(mc_stmt("b"));
  } else if (name == "sphere" || name == "wedge") {
    if (name == "sphere" && params.size() != 1)
      throw Error(ErrorKind::Usage, "sphere takes exactly one dimension");
    if (params.empty()) throw Error(ErrorKind::Usage, "wedge needs at least one dimension");
    for (int d : params)
      if (d < 1) throw Error(ErrorKind::Usage, "sphere dimensions must be at least 1");
    auto names = generator_names(params);
    for (std::size_t i = 0; i < params.size(); ++i) m.body.push_back(gen_stmt({names[i]}, params[i] - 1));
    Expr zero;
    zero.kind = Expr::Kind::Num;
    zero.num = 0;
    for (const auto& n : names) m.body.push_back(diff_stmt(n, zero));
  } else {
    throw Error(ErrorKind::Usage, "unknown builtin model " + name);
  }
  return m;
}

std::pair<std::string, std::vector<int>> parse_model_ref(const std::string& ref) {
  static const std::regex re(R"(\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\))?\s*)");
  std::smatch m;
  if (!std::regex_match(ref, m, re)) throw Error(ErrorKind::Usage, "bad model reference '" + ref + "'");
  std::vector<int> params;
  if (m[2].matched) {
    std::string s = m[2].str();
    static const std::regex num(R"(-?\d+)");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), num); it != std::sregex_iterator(); ++it)
      params.push_back(std::stoi(it->str()));
  }
  return {m[1].str(), params};
}

namespace {

class Elaborator {
 public:
  Elaborator(const ElabOptions& o, Workspace& ws) : opts_(o), ws_(ws) {}

  void model(const ModelAst& in) {
    if (ws_.model(in.name)) {
      error(in.pos, "duplicate model " + in.name);
      return;
    }
    ModelAst ast = in;
    if (in.is_builtin) {
      try {
        ast = builtin_ast(in.builtin, in.params, opts_.cap.value_or(kDefaultCap), in.name);
        ast.pos = in.pos;
      } catch (const Error& e) {
        error(in.pos, e.what());
        return;
      }
    }
    int cap = kDefaultCap;
    std::vector<Generator> gens;
    std::set<std::string> seen;
    for (const auto& s : ast.body) {
      if (s.kind == Stmt::Kind::Truncate) {
        if (s.value < 1) error(s.pos, "truncation must be at least 1");
        else cap = s.value;
      }
      if (s.kind == Stmt::Kind::Gen) {
        for (std::size_t i = 0; i < s.names.size(); ++i) {
          Pos p = i < s.name_pos.size() ? s.name_pos[i] : s.pos;
          if (!seen.insert(s.names[i]).second) {
            error(p, "duplicate generator " + s.names[i]);
            continue;
          }
          if (s.value < -1) {
            error(s.pos, "generator degree " + std::to_string(s.value) + " is below -1");
            continue;
          }
          gens.push_back({s.names[i], s.value});
        }
      }
    }
    if (opts_.cap) cap = *opts_.cap;
    if (gens.size() > 250) {
      error(ast.pos, "too many generators");
      return;
    }
    Model m;
    m.name = in.name;
    m.ast = ast;
    auto lie = std::make_shared<const FreeLie>(gens, cap);
    std::vector<Tensor> d(gens.size());
    std::vector<bool> has_d(gens.size(), false);
    bool ok = true;
    for (const auto& s : ast.body) {
      if (s.kind != Stmt::Kind::Diff) continue;
      Pos p = s.name_pos.empty() ? s.pos : s.name_pos[0];
      int g = lie->index_of(s.names[0]);
      if (g < 0) {
        error(p, "unknown generator " + s.names[0]);
        ok = false;
        continue;
      }
      if (has_d[g]) {
        error(p, "differential of " + s.names[0] + " given twice");
        ok = false;
        continue;
      }
      has_d[g] = true;
      auto v = eval_lie(s.expr, *lie, lie->gen_degree(g) - 1, ws_.diagnostics);
      if (!v) ok = false;
      else d[g] = *v;
    }
    if (!ok) return;
    m.dgl = DGL(in.name, lie, d);
    try {
      m.dgl.validate();
    } catch (const Error& e) {
      error(ast.pos, std::string("model ") + in.name + ": " + e.what());
      return;
    }
    for (const auto& s : ast.body) {
      Pos p = s.name_pos.empty() ? s.pos : s.name_pos[0];
      if (s.kind == Stmt::Kind::MC) {
        Tensor a;
        if (!s.has_expr) {
          int g = lie->index_of(s.names[0]);
          if (g < 0) {
            error(p, "unknown generator " + s.names[0]);
            continue;
          }
          a = lie->gen(g);
        } else {
          if (lie->index_of(s.names[0]) >= 0) {
            error(p, "MC name " + s.names[0] + " clashes with a generator");
            continue;
          }
          auto v = eval_lie(s.expr, *lie, -1, ws_.diagnostics);
          if (!v) continue;
          a = *v;
        }
        if (m.mc(s.names[0])) {
          error(p, "duplicate MC element " + s.names[0]);
          continue;
        }
        if (!check_mc(m.dgl, a).ok) {
          error(p, s.names[0] + " is not a Maurer-Cartan element");
          continue;
        }
        m.mcs.push_back({s.names[0], a});
      } else if (s.kind == Stmt::Kind::Filtration) {
        GeneratorFiltration f;
        f.name = s.names[0];
        bool fok = true;
        std::size_t k = 1;
        for (const auto& lvl : s.levels) {
          std::vector<int> ids;
          for (const auto& n : lvl) {
            Pos q = k < s.name_pos.size() ? s.name_pos[k] : s.pos;
            ++k;
            int g = lie->index_of(n);
            if (g < 0) {
              error(q, "unknown generator " + n);
              fok = false;
            }
            ids.push_back(g);
          }
          f.levels.push_back(ids);
        }
        if (!fok) continue;
        try {
          f.validate(*lie);
        } catch (const Error& e) {
          error(p, "filtration " + f.name + ": " + e.what());
          continue;
        }
        if (m.filtration(f.name)) {
          error(p, "duplicate filtration " + f.name);
          continue;
        }
        m.filtrations.push_back(f);
      } else if (s.kind == Stmt::Kind::Derivation) {
        if (m.derivation(s.names[0])) {
          error(p, "duplicate derivation " + s.names[0]);
          continue;
        }
        auto th = derivation(s, *lie);
        if (th) m.derivations.push_back({s.names[0], *th});
      }
    }
    ws_.models.push_back(std::move(m));
  }

  void map(const MapAst& in) {
    if (ws_.morphism(in.name) || ws_.homotopy(in.name)) {
      error(in.pos, "duplicate declaration " + in.name);
      return;
    }
    if (!in.homotopy) {
      const Model* a = ws_.model(in.from);
      const Model* b = ws_.model(in.to);
      if (!a) error(in.from_pos, "unknown model " + in.from);
      if (!b) error(in.to_pos, "unknown model " + in.to);
      if (!a || !b) return;
      const FreeLie& S = a->dgl.lie();
      MorphismDef f{in.name, in.from, in.to, std::vector<Tensor>(S.ngens())};
      std::vector<bool> set(S.ngens(), false);
      bool ok = true;
      for (const auto& bnd : in.bindings) {
        int g = S.index_of(bnd.name);
        if (g < 0) {
          error(bnd.pos, "unknown generator " + bnd.name);
          ok = false;
          continue;
        }
        if (set[g]) {
          error(bnd.pos, "generator " + bnd.name + " mapped twice");
          ok = false;
          continue;
        }
        set[g] = true;
        auto v = eval_lie(bnd.value, b->dgl.lie(), S.gen_degree(g), ws_.diagnostics);
        if (!v) ok = false;
        else f.images[g] = *v;
      }
      if (!ok) return;
      std::string why;
      if (!is_dgl_morphism(a->dgl, b->dgl, f.images, &why)) {
        error(in.pos, "morphism " + in.name + " does not commute with the differentials: " + why);
        return;
      }
      ws_.morphisms.push_back(std::move(f));
      return;
    }
    const MorphismDef* f = ws_.morphism(in.from);
    const MorphismDef* g = ws_.morphism(in.to);
    if (!f) error(in.from_pos, "unknown morphism " + in.from);
    if (!g) error(in.to_pos, "unknown morphism " + in.to);
    if (!f || !g) return;
    if (f->source != g->source || f->target != g->target) {
      error(in.pos, "morphisms " + in.from + " and " + in.to + " have different source or target");
      return;
    }
    const Model* a = ws_.model(f->source);
    const Model* b = ws_.model(f->target);
    const FreeLie& S = a->dgl.lie();
    Cylinder cyl(b->dgl, opts_.poly_cap);
    HomotopyDef h{in.name, in.from, in.to, std::vector<PolyForm>(S.ngens())};
    std::vector<bool> set(S.ngens(), false);
    bool ok = true;
    for (const auto& bnd : in.bindings) {
      int k = S.index_of(bnd.name);
      if (k < 0) {
        error(bnd.pos, "unknown generator " + bnd.name);
        ok = false;
        continue;
      }
      if (set[k]) {
        error(bnd.pos, "generator " + bnd.name + " mapped twice");
        ok = false;
        continue;
      }
      set[k] = true;
      auto v = eval_form(bnd.value, cyl, S.gen_degree(k), ws_.diagnostics);
      if (!v) ok = false;
      else h.witness[k] = *v;
    }
    if (cyl.overflow())
      ws_.diagnostics.push_back({in.pos, "warning", "witness " + in.name + " exceeds the polynomial cap"});
    if (ok) ws_.homotopies.push_back(std::move(h));
  }

 private:
  const ElabOptions& opts_;
  Workspace& ws_;

  void error(Pos p, const std::string& m) { ws_.diagnostics.push_back({p, "error", m}); }

  std::optional<Derivation> derivation(const Stmt& s, const FreeLie& lie) {
    Derivation th;
    th.values.assign(lie.ngens(), Tensor{});
    std::optional<int> deg;
    std::vector<bool> set(lie.ngens(), false);
    bool ok = true;
    for (const auto& b : s.bindings) {
      int g = lie.index_of(b.name);
      if (g < 0) {
        error(b.pos, "unknown generator " + b.name);
        ok = false;
        continue;
      }
      if (set[g]) {
        error(b.pos, "generator " + b.name + " mapped twice");
        ok = false;
        continue;
      }
      set[g] = true;
      auto v = eval_lie(b.value, lie, std::nullopt, ws_.diagnostics);
      if (!v) {
        ok = false;
        continue;
      }
      auto d = lie.degree_of(*v);
      if (d) {
        int n = *d - lie.gen_degree(g);
        if (deg && *deg != n) {
          error(b.value.pos, "derivation " + s.names[0] + " has inconsistent degree");
          ok = false;
          continue;
        }
        deg = n;
      }
      th.values[g] = *v;
    }
    if (!ok) return std::nullopt;
    th.degree = deg.value_or(0);
    return th;
  }
};

}  // namespace

Workspace elaborate(const Document& doc, const ElabOptions& opts) {
  Workspace ws;
  ws.poly_cap = opts.poly_cap;
  Elaborator el(opts, ws);
  for (const auto& [kind, idx] : doc.order) {
    try {
      if (kind == 0) el.model(doc.models[idx]);
      else el.map(doc.maps[idx]);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Resource) throw;
      Pos p = kind == 0 ? doc.models[idx].pos : doc.maps[idx].pos;
      ws.diagnostics.push_back({p, "error", e.what()});
    }
  }
  return ws;
}

Workspace load_model_text(const std::string& text, const ElabOptions& opts) {
  ParseResult pr = parse_document(text);
  if (!pr.ok()) {
    Workspace ws;
    ws.diagnostics = pr.diagnostics;
    return ws;
  }
  Workspace ws = elaborate(pr.doc, opts);
  ws.diagnostics.insert(ws.diagnostics.begin(), pr.diagnostics.begin(), pr.diagnostics.end());
  return ws;
}

Model builtin_model(const std::string& name, const std::vector<int>& params, int cap) {
  Document doc;
  doc.models.push_back(builtin_ast(name, params, cap));
  doc.order.push_back({0, 0});
  Workspace ws = elaborate(doc, {});
  if (!ws.ok() || ws.models.empty()) {
    std::string msg = "builtin " + name + " failed to elaborate";
    if (!ws.diagnostics.empty()) msg += ": " + ws.diagnostics[0].message;
    throw Error(ErrorKind::Internal, msg);
  }
  return ws.models[0];
}

}  // namespace cdgl
