#include <gtest/gtest.h>

#include <filesystem>

#include "corpus.hpp"
#include "support.hpp"

using namespace cdgl;
using namespace testing_support;

TEST(Parse, CircleSource) {
  const char* text =
      "model S {\n  gen b : -1  gen x : 0\n  d b = -1/2 * [b,b]\n  d x = [x,b]\n}\n";
  Workspace ws = load_model_text(text);
  ASSERT_TRUE(ws.ok());
  Model builtin = builtin_model("S1", {}, kDefaultCap);
  const Model* m = ws.model("S");
  ASSERT_NE(m, nullptr);
  EXPECT_EQ(m->dgl.lie().gens(), builtin.dgl.lie().gens());
  EXPECT_EQ(m->dgl.d_values(), builtin.dgl.d_values());
}

TEST(Parse, IntervalBuiltinMatchesFile) {
  Workspace ws = load_model_text(read_file(models_dir() + "/interval.cdgl"));
  ASSERT_TRUE(ws.ok());
  ASSERT_FALSE(ws.models.empty());
  EXPECT_NO_THROW(ws.models[0].dgl.validate());
}

TEST(Parse, ExpressionForms) {
  Expr e;
  ASSERT_TRUE(parse_expression("-1/2 * [a, [a, b]] + expad(t * u, v) - dt * u", &e).ok());
  Expr back;
  ASSERT_TRUE(parse_expression(print_expr(e), &back).ok());
  EXPECT_EQ(e, back);
  Expr pw;
  ASSERT_TRUE(parse_expression("t^3 * x", &pw).ok());
  EXPECT_EQ(print_expr(pw), "t^3 * x");
}

TEST(Parse, FiltrationAndDerivation) {
  Workspace ws = load_model_text(read_file(models_dir() + "/wedge_stabilizer.cdgl"));
  ASSERT_TRUE(ws.ok());
  const Model& m = ws.models[0];
  ASSERT_EQ(m.filtrations.size(), 1u);
  EXPECT_EQ(m.filtrations[0].levels.size(), 2u);
  ASSERT_EQ(m.derivations.size(), 1u);
  EXPECT_EQ(m.derivations[0].second.degree, 0);
}

TEST(Parse, CapOverride) {
  ElabOptions o;
  o.cap = 7;
  Workspace ws = load_model_text("model A {\n  truncate 3\n  gen x : 1\n}\n", o);
  ASSERT_TRUE(ws.ok());
  EXPECT_EQ(ws.models[0].dgl.cap(), 7);
}

TEST(Diagnostics, FormatIsLineColError) {
  auto d = first_error(kCorpus[0].text);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->str(), "3:13: error: unknown generator y");
}

TEST(Diagnostics, ErrorCorpusPositions) {
  for (const auto& c : kCorpus) {
    auto d = first_error(c.text);
    ASSERT_TRUE(d) << c.name;
    EXPECT_EQ(d->pos.line, c.line) << c.name << ": " << d->str();
    EXPECT_EQ(d->pos.col, c.col) << c.name << ": " << d->str();
    EXPECT_NE(d->message.find(c.message), std::string::npos) << c.name << ": " << d->str();
  }
}

TEST(Diagnostics, RecoveryReportsSeveralErrors) {
  ParseResult pr = parse_document("model A {\n  foo\n  gen x : 1\n  bar\n}\nmodel B {\n  gen y 2\n}\n");
  int errors = 0;
  for (const auto& d : pr.diagnostics) errors += d.severity == "error";
  EXPECT_GE(errors, 3);
}

TEST(RoundTrip, Builtins) {
  std::vector<std::pair<std::string, std::vector<int>>> all{
      {"L0", {}}, {"L1", {}}, {"S1", {}}, {"sphere", {2}}, {"sphere", {3}}, {"wedge", {1, 1}},
      {"wedge", {3, 3}}, {"wedge", {1, 2, 3}}};
  for (const auto& [name, params] : all) {
    Document doc;
    doc.models.push_back(builtin_ast(name, params, 4));
    doc.order.push_back({0, 0});
    std::string text = print_document(doc);
    ParseResult pr = parse_document(text);
    ASSERT_TRUE(pr.ok()) << text;
    EXPECT_EQ(pr.doc, doc) << name;
    EXPECT_EQ(print_document(pr.doc), text);
    Workspace ws = elaborate(pr.doc);
    EXPECT_TRUE(ws.ok()) << name;
  }
}

TEST(RoundTrip, ModelCorpus) {
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(models_dir())) {
    if (entry.path().extension() != ".cdgl") continue;
    ++files;
    ParseResult pr = parse_document(read_file(entry.path().string()));
    ASSERT_TRUE(pr.ok()) << entry.path();
    std::string once = print_document(pr.doc);
    ParseResult again = parse_document(once);
    ASSERT_TRUE(again.ok()) << once;
    EXPECT_EQ(again.doc, pr.doc) << entry.path();
    EXPECT_EQ(print_document(again.doc), once);
    EXPECT_TRUE(elaborate(pr.doc).ok()) << entry.path();
  }
  EXPECT_GE(files, 7);
}

TEST(Builtins, ModelRefParsing) {
  EXPECT_EQ(parse_model_ref("sphere(2)"), (std::pair<std::string, std::vector<int>>{"sphere", {2}}));
  EXPECT_EQ(parse_model_ref("L1").first, "L1");
  EXPECT_THROW(parse_model_ref("sphere(2"), Error);
  EXPECT_THROW(builtin_model("sphere", {0}, 3), Error);
  EXPECT_THROW(builtin_model("nope", {}, 3), Error);
}

TEST(RoundTrip, SharedCorpusHelpers) {
  int n = 0;
  EXPECT_TRUE(round_trip_failures(&n).empty());
  EXPECT_GE(n, 15);
  EXPECT_TRUE(corpus_mismatches().empty());
}
