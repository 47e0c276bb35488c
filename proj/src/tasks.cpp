#include "cdgl/tasks.hpp"

#include <chrono>
#include <regex>

#include "cdgl/bch.hpp"
#include "cdgl/derivations.hpp"
#include "cdgl/gauge.hpp"
#include "cdgl/h0_group.hpp"

namespace cdgl {

const std::vector<std::string>& task_commands() {
  static const std::vector<std::string> c = {"check", "homology", "bch",    "gauge",    "gauge-equiv",
                                             "exp",   "log",      "h0",     "pi-map",   "baut",
                                             "bautstar", "witness"};
  return c;
}

std::pair<int, int> parse_range(const std::string& s) {
  static const std::regex re(R"(\s*(-?\d{1,6})\s*\.\.\s*(-?\d{1,6})\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error(ErrorKind::Usage, "bad range '" + s + "', expected a..b");
  int a = std::stoi(m[1].str()), b = std::stoi(m[2].str());
  if (a > b) throw Error(ErrorKind::Usage, "empty range " + s);
  return {a, b};
}

namespace {

struct DiagnosticsFailure {
  std::vector<Diagnostic> diags;
};

struct Context {
  Workspace ws;
  const Model* model = nullptr;
  std::string source;
};

Context load(const TaskOptions& o, std::optional<int> cap) {
  Context c;
  ElabOptions eo;
  eo.cap = cap;
  eo.poly_cap = o.poly_cap;
  if (o.file_text) {
    ParseResult pr = parse_document(*o.file_text);
    if (!pr.ok()) throw DiagnosticsFailure{pr.diagnostics};
    c.ws = elaborate(pr.doc, eo);
    if (!c.ws.ok()) throw DiagnosticsFailure{c.ws.diagnostics};
    c.source = print_document(pr.doc);
  }
  std::string name = o.model;
  if (name.empty()) {
    if (c.ws.models.empty()) {
      if (o.command == "witness" || o.command == "pi-map") return c;
      throw Error(ErrorKind::Usage, "no model given; use --model or a model file");
    }
    c.model = &c.ws.models.front();
    return c;
  }
  if (const Model* m = c.ws.model(name)) {
    c.model = m;
    return c;
  }
  auto [b, params] = parse_model_ref(name);
  if (!is_builtin(b)) throw Error(ErrorKind::Usage, "unknown model " + name);
  Model m = builtin_model(b, params, cap.value_or(kDefaultCap));
  m.name = name;
  Document d;
  d.models.push_back(m.ast);
  d.order.push_back({0, 0});
  c.source += print_document(d);
  c.ws.models.push_back(std::move(m));
  c.model = &c.ws.models.back();
  return c;
}

Tensor expr_arg(const std::string& text, const FreeLie& lie, std::optional<int> degree,
                const char* flag) {
  if (text.empty()) throw Error(ErrorKind::Usage, std::string("missing --") + flag);
  Expr e;
  ParseResult pr = parse_expression(text, &e);
  if (!pr.ok()) throw DiagnosticsFailure{pr.diagnostics};
  std::vector<Diagnostic> diags;
  auto v = eval_lie(e, lie, degree, diags);
  if (!v) throw DiagnosticsFailure{diags};
  return *v;
}

Tensor mc_arg(const std::string& text, const Model& m, const char* flag) {
  if (const Tensor* a = m.mc(text)) return *a;
  Tensor a = expr_arg(text, m.dgl.lie(), -1, flag);
  if (!check_mc(m.dgl, a).ok) throw Error(ErrorKind::MCViolation, text + " is not a Maurer-Cartan element");
  return a;
}

Json images_json(const FreeLie& src, const FreeLie& tgt, const std::vector<Tensor>& v) {
  Json j = Json::object();
  for (int g = 0; g < src.ngens(); ++g) j[src.gens()[g].name] = tgt.format(v[g]);
  return j;
}

const Model& need_model(const Context& c) {
  if (!c.model) throw Error(ErrorKind::Usage, "no model given");
  return *c.model;
}

std::pair<int, int> need_range(const TaskOptions& o) {
  if (!o.range) throw Error(ErrorKind::Usage, o.command + " needs a degree window (--range a..b)");
  if (o.range->second - o.range->first > 64) throw Error(ErrorKind::Usage, "degree window wider than 64");
  return *o.range;
}

DGL chosen_dgl(const TaskOptions& o, const Model& m) {
  if (o.mc.empty()) return m.dgl;
  return perturb(m.dgl, mc_arg(o.mc, m, "mc"));
}

Json task_check(const TaskOptions&, const Context& c, Report&) {
  Json r = Json::object();
  Json models = Json::object();
  for (const auto& m : c.ws.models) {
    const FreeLie& L = m.dgl.lie();
    Json j = Json::object();
    Json gens = Json::object(), d = Json::object();
    for (int g = 0; g < L.ngens(); ++g) {
      gens[L.gens()[g].name] = L.gen_degree(g);
      d[L.gens()[g].name] = L.format(m.dgl.d_values()[g]);
    }
    j["generators"] = gens;
    j["differential"] = d;
    j["d_squared_zero"] = true;
    Json mcs = Json::object();
    for (const auto& [n, a] : m.mcs) mcs[n] = L.format(a);
    j["mc"] = mcs;
    Json fs = Json::array();
    for (const auto& f : m.filtrations) fs.push_back(f.name);
    j["filtrations"] = fs;
    Json ders = Json::object();
    for (const auto& [n, th] : m.derivations) ders[n] = Json{{"degree", th.degree}, {"values", images_json(L, L, th.values)}};
    j["derivations"] = ders;
    j["truncation"] = meta_json(truncation_meta(m.dgl));
    models[m.name] = j;
  }
  r["models"] = models;
  Json mors = Json::object();
  for (const auto& f : c.ws.morphisms)
    mors[f.name] = Json{{"source", f.source}, {"target", f.target}, {"dgl_morphism", true}};
  r["morphisms"] = mors;
  Json hs = Json::array();
  for (const auto& h : c.ws.homotopies) hs.push_back(h.name);
  r["homotopies"] = hs;
  r["status"] = "PASS";
  return r;
}

Json task_homology(const TaskOptions& o, const Context& c, Report& rep) {
  const Model& m = need_model(c);
  auto [lo, hi] = need_range(o);
  DGL l = chosen_dgl(o, m);
  const FreeLie& L = l.lie();
  GradedChainComplex cx = lie_complex(l, lo - 1, hi + 1);
  Json r = Json::object(), degs = Json::object(), dims = Json::object();
  for (int n = lo; n <= hi; ++n) {
    HomologyReport h = homology_at(cx, n);
    Json reps = Json::array();
    for (const auto& v : h.cycle_reps) reps.push_back(L.format(L.from_coordinates(v, n)));
    degs[std::to_string(n)] = Json{{"dimension", h.dimension}, {"chains", h.chains}, {"representatives", reps}};
    dims[std::to_string(n)] = h.dimension;
    rep.result["degrees"] = degs;
    rep.result["dimensions"] = dims;
  }
  r["degrees"] = degs;
  r["dimensions"] = dims;
  if (!o.mc.empty()) r["twisted_by"] = o.mc;
  return r;
}

Json task_bch(const TaskOptions& o, const Context& c, Report&) {
  const Model& m = need_model(c);
  const FreeLie& L = m.dgl.lie();
  Tensor x = expr_arg(o.x, L, 0, "x"), y = expr_arg(o.y, L, 0, "y");
  Tensor z = bch(L, x, y);
  return Json{{"x", L.format(x)}, {"y", L.format(y)}, {"bch", L.format(z)}, {"is_lie", L.is_lie(z)}};
}

Json task_gauge(const TaskOptions& o, const Context& c, Report&) {
  const Model& m = need_model(c);
  const FreeLie& L = m.dgl.lie();
  Tensor x = expr_arg(o.x, L, 0, "x");
  Tensor a = mc_arg(o.mc, m, "mc");
  Tensor b = gauge_act(m.dgl, x, a);
  return Json{{"x", L.format(x)}, {"mc", L.format(a)}, {"result", L.format(b)}, {"result_is_mc", check_mc(m.dgl, b).ok}};
}

Json task_gauge_equiv(const TaskOptions& o, const Context& c, Report&) {
  const Model& m = need_model(c);
  const FreeLie& L = m.dgl.lie();
  Tensor a = mc_arg(o.from, m, "from"), b = mc_arg(o.to, m, "to");
  GaugeResult g = gauge_equivalent(m.dgl, a, b);
  Json r{{"from", L.format(a)}, {"to", L.format(b)}, {"equivalent", g.equivalent}, {"stages", g.stages}};
  if (g.equivalent) {
    r["witness"] = L.format(g.witness);
    r["witness_check"] = gauge_act(m.dgl, g.witness, a) == b;
  } else {
    r["obstruction_length"] = g.obstruction_length;
  }
  return r;
}

Json task_exp(const TaskOptions& o, const Context& c, Report&) {
  const Model& m = need_model(c);
  const FreeLie& L = m.dgl.lie();
  const Derivation* th = m.derivation(o.derivation);
  if (!th) throw Error(ErrorKind::Usage, "unknown derivation '" + o.derivation + "'");
  auto img = exp_derivation(L, *th);
  std::string why;
  return Json{{"derivation", o.derivation}, {"exp", images_json(L, L, img)},
              {"dgl_morphism", is_dgl_morphism(m.dgl, m.dgl, img, &why)}};
}

Json task_log(const TaskOptions& o, const Context& c, Report&) {
  const MorphismDef* f = c.ws.morphism(o.morphism);
  if (!f) throw Error(ErrorKind::Usage, "unknown morphism '" + o.morphism + "'");
  if (f->source != f->target) throw Error(ErrorKind::Usage, "log needs an endomorphism");
  const Model& m = *c.ws.model(f->source);
  const FreeLie& L = m.dgl.lie();
  Derivation th = log_automorphism(L, f->images);
  DerComplex der = DerComplex::of(m.dgl);
  return Json{{"morphism", o.morphism}, {"log", images_json(L, L, th.values)}, {"degree", th.degree},
              {"D_cycle", der.is_zero(der.D(th))}, {"exp_log_identity", exp_derivation(L, th) == f->images}};
}

Json task_h0(const TaskOptions& o, const Context& c, Report&) {
  const Model& m = need_model(c);
  DGL l = chosen_dgl(o, m);
  const FreeLie& L = l.lie();
  H0Group g(l);
  Json reps = Json::array();
  for (const auto& r : g.representatives()) reps.push_back(L.format(r));
  Json consts = Json::array();
  for (const auto& row : g.bracket_constants()) {
    Json jr = Json::array();
    for (const auto& v : row) jr.push_back(vec_json(v));
    consts.push_back(jr);
  }
  return Json{{"dimension", g.dimension()}, {"representatives", reps}, {"bracket_constants", consts},
              {"nilpotency_class", g.nilpotency_class()}, {"abelian", g.abelian()},
              {"dimensions", Json{{"0", g.dimension()}}}};
}

Json task_pi_map(const TaskOptions& o, const Context& c, Report&) {
  auto [lo, hi] = need_range(o);
  const MorphismDef* f = c.ws.morphism(o.morphism);
  if (!f) throw Error(ErrorKind::Usage, "unknown morphism '" + o.morphism + "'");
  const Model& a = *c.ws.model(f->source);
  const Model& b = *c.ws.model(f->target);
  MappingReport mr = mapping_space_pi(a.dgl, b.dgl, f->images, lo, hi);
  Json pointed = Json::object(), free = Json::object();
  for (const auto& [n, d] : mr.pointed) pointed[std::to_string(n)] = d;
  for (const auto& [n, d] : mr.free) free[std::to_string(n)] = d;
  Json fails = Json::array();
  for (const auto& s : mr.les.failures) fails.push_back(s);
  return Json{{"morphism", o.morphism}, {"pointed", pointed}, {"free", free},
              {"fiber_components_h0", mr.fiber_components}, {"les_exact", mr.les.exact},
              {"les_failures", fails}, {"dimensions", Json{{"pointed", pointed}, {"free", free}}}};
}

GSpec gspec_arg(const std::string& s, const Model& m) {
  GSpec g;
  if (s == "identity") return g;
  if (s.rfind("stabilizer:", 0) == 0) {
    const GeneratorFiltration* f = m.filtration(s.substr(11));
    if (!f) throw Error(ErrorKind::Usage, "unknown filtration '" + s.substr(11) + "'");
    g.kind = GSpec::Kind::STABILIZER;
    g.filtration = *f;
    g.has_filtration = true;
    return g;
  }
  if (s.rfind("span:", 0) == 0) {
    g.kind = GSpec::Kind::SPAN;
    std::string rest = s.substr(5);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t e = rest.find(',', pos);
      std::string n = rest.substr(pos, e == std::string::npos ? std::string::npos : e - pos);
      const Derivation* th = m.derivation(n);
      if (!th) throw Error(ErrorKind::Usage, "unknown derivation '" + n + "'");
      g.span.push_back(*th);
      g.span_names.push_back(n);
      if (e == std::string::npos) break;
      pos = e + 1;
    }
    if (m.filtrations.size() == 1) {
      g.filtration = m.filtrations[0];
      g.has_filtration = true;
    }
    return g;
  }
  throw Error(ErrorKind::Usage, "bad --gspec '" + s + "'");
}

Json task_baut(const TaskOptions& o, const Context& c, Report&, bool pointed) {
  const Model& m = need_model(c);
  auto [lo, hi] = need_range(o);
  GSpec g = gspec_arg(o.gspec, m);
  ClassifyingReport cr = classifying_invariants(m.dgl, g, pointed, lo, hi);
  Json hom = Json::object(), reps = Json::object();
  for (const auto& [n, h] : cr.homology) {
    hom[std::to_string(n)] = h.dimension;
    Json rr = Json::array();
    for (const auto& s : cr.reps[n]) rr.push_back(s);
    reps[std::to_string(n)] = rr;
  }
  Json grp{{"dimension", cr.group.dimension}, {"abelian", cr.group.abelian},
           {"nilpotency_class", cr.group.nilpotency_class}};
  Json labels = Json::array();
  for (const auto& s : cr.group.labels) labels.push_back(s);
  grp["basis"] = labels;
  Json consts = Json::array();
  for (const auto& row : cr.group.constants) {
    Json jr = Json::array();
    for (const auto& v : row) jr.push_back(vec_json(v));
    consts.push_back(jr);
  }
  grp["bracket_constants"] = consts;
  Json post = Json::object();
  for (const auto& [n, d] : cr.postnikov) post[std::to_string(n)] = d;
  Json notes = Json::array();
  for (const auto& s : cr.g0.notes) notes.push_back(s);
  Json r{{"gspec", g.describe()},
         {"homology", hom},
         {"representatives", reps},
         {"h0_der", cr.h0_der_dim},
         {"group", grp},
         {"homology_nilpotency_index", cr.nilpotency_index},
         {"nilpotency_window_limited", cr.nilpotency_window_limited},
         {"postnikov", post},
         {"der_g0_dimension", cr.g0.basis.size()},
         {"r0_dimension", cr.g0.r0.size()},
         {"r0_contained", cr.g0.contains_r0},
         {"saturated", cr.g0.saturated},
         {"notes", notes}};
  Json dims{{"homology", hom}};
  if (pointed) {
    Json tot = Json::object();
    for (const auto& [n, d] : cr.total_homology) tot[std::to_string(n)] = d;
    r["l_der_homology"] = tot;
    dims["l_der_homology"] = tot;
  } else {
    r["im_h0_ad"] = cr.im_h0_ad_dim;
  }
  r["dimensions"] = dims;
  return r;
}

Json task_witness(const TaskOptions& o, const Context& c, Report& rep) {
  const HomotopyDef* h = c.ws.homotopy(o.homotopy);
  if (!h) throw Error(ErrorKind::Usage, "unknown homotopy '" + o.homotopy + "'");
  const MorphismDef* f = c.ws.morphism(h->f);
  const MorphismDef* g = c.ws.morphism(h->g);
  const Model& a = *c.ws.model(f->source);
  const Model& b = *c.ws.model(f->target);
  HomotopyResult hr = check_homotopy(a.dgl, b.dgl, h->witness, f->images, g->images, o.poly_cap);
  Json r{{"homotopy", h->name}, {"from", h->f}, {"to", h->g}, {"verdict", hr.ok},
         {"terminated", hr.terminated}, {"stable_at_next_poly_cap", hr.stable}};
  if (!hr.ok) {
    r["generator"] = hr.generator;
    r["certificate"] = hr.certificate;
    rep.exit_code = 1;
  }
  return r;
}

Json dispatch(const TaskOptions& o, const Context& c, Report& rep) {
  const std::string& k = o.command;
  if (k == "check") return task_check(o, c, rep);
  if (k == "homology") return task_homology(o, c, rep);
  if (k == "bch") return task_bch(o, c, rep);
  if (k == "gauge") return task_gauge(o, c, rep);
  if (k == "gauge-equiv") return task_gauge_equiv(o, c, rep);
  if (k == "exp") return task_exp(o, c, rep);
  if (k == "log") return task_log(o, c, rep);
  if (k == "h0") return task_h0(o, c, rep);
  if (k == "pi-map") return task_pi_map(o, c, rep);
  if (k == "baut") return task_baut(o, c, rep, false);
  if (k == "bautstar") return task_baut(o, c, rep, true);
  if (k == "witness") return task_witness(o, c, rep);
  throw Error(ErrorKind::Usage, "unknown command '" + k + "'");
}

bool homology_bearing(const std::string& k) {
  return k == "homology" || k == "h0" || k == "pi-map" || k == "baut" || k == "bautstar";
}

Json build_meta(const TaskOptions& o, const Context* c) {
  Json m{{"tool", "cdgl"}, {"version", kToolVersion}, {"command", o.command},
         {"word_cap", o.word_cap}, {"poly_cap", o.poly_cap},
         {"resource_limit", resource_limit()}};
  if (o.file) m["file"] = *o.file;
  if (!o.model.empty()) m["model"] = o.model;
  if (o.range) m["range"] = std::to_string(o.range->first) + ".." + std::to_string(o.range->second);
  if (o.cap) m["truncate_override"] = *o.cap;
  if (o.command == "baut" || o.command == "bautstar") m["gspec"] = o.gspec;
  Json args = Json::object();
  for (auto [n, v] : std::vector<std::pair<const char*, const std::string*>>{
           {"x", &o.x}, {"y", &o.y}, {"mc", &o.mc}, {"from", &o.from}, {"to", &o.to},
           {"derivation", &o.derivation}, {"morphism", &o.morphism}, {"homotopy", &o.homotopy}})
    if (!v->empty()) args[n] = *v;
  m["args"] = args;
  if (c) {
    if (c->model) {
      m["truncation"] = meta_json(truncation_meta(c->model->dgl));
      m["cap"] = c->model->dgl.cap();
    }
    m["source"] = c->source;
  }
  return m;
}

}  // namespace

Report run_task(const TaskOptions& o) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.command = o.command;
  rep.meta = build_meta(o, nullptr);
  try {
    bool known = false;
    for (const auto& k : task_commands()) known = known || k == o.command;
    if (!known) throw Error(ErrorKind::Usage, "unknown command '" + o.command + "'");
    if (o.word_cap < 1) throw Error(ErrorKind::Usage, "word cap must be at least 1");
    if (o.poly_cap < 0) throw Error(ErrorKind::Usage, "polynomial cap must be non-negative");
    if (o.cap && *o.cap < 1) throw Error(ErrorKind::Usage, "truncation must be at least 1");
    if (homology_bearing(o.command) && o.command != "h0") need_range(o);
    Context c = load(o, o.cap);
    rep.meta = build_meta(o, &c);
    rep.partial = true;
    rep.result = dispatch(o, c, rep);
    rep.partial = false;
    if (o.stability && homology_bearing(o.command)) {
      int cap = c.model ? c.model->dgl.cap() : kDefaultCap;
      if (!c.model && o.command == "pi-map") {
        const MorphismDef* f = c.ws.morphism(o.morphism);
        cap = c.ws.model(f->target)->dgl.cap();
      }
      try {
        Context c1 = load(o, cap + 1);
        Report tmp;
        Json r1 = dispatch(o, c1, tmp);
        rep.result["stable"] = r1["dimensions"] == rep.result["dimensions"];
        rep.result["stability_cap"] = cap + 1;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Resource) throw;
        rep.result["stable"] = "unknown";
        rep.diagnostics.push_back(std::string("stability rerun skipped: ") + e.what());
      }
    }
  } catch (const DiagnosticsFailure& d) {
    for (const auto& x : d.diags) rep.diagnostics.push_back(x.str());
    rep.exit_code = 1;
    rep.partial = false;
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string(error_kind_name(e.kind())) + ": " + e.what());
    if (e.kind() == ErrorKind::Resource) {
      rep.exit_code = 2;
      rep.partial = true;
    } else {
      rep.exit_code = 1;
      rep.partial = false;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace cdgl
