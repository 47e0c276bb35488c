#include <gtest/gtest.h>

#include "cdgl/tasks.hpp"
#include "support.hpp"

using namespace cdgl;
using namespace testing_support;

namespace {

TaskOptions opts(const std::string& cmd, const std::string& model) {
  TaskOptions o;
  o.command = cmd;
  o.model = model;
  return o;
}

TaskOptions file_opts(const std::string& cmd, const std::string& file) {
  TaskOptions o;
  o.command = cmd;
  o.file = file;
  o.file_text = read_file(models_dir() + "/" + file);
  return o;
}

}  // namespace

TEST(Cli, BautTwoSphere) {
  TaskOptions o = opts("baut", "sphere(2)");
  o.range = {1, 6};
  Report r = run_task(o);
  ASSERT_EQ(r.exit_code, 0) << r.diagnostics.dump();
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(r.result["homology"][std::to_string(k)], k == 3 ? 1 : 0);
  EXPECT_EQ(r.result["stable"], true);
}

TEST(Cli, CanonicalOutputIsDeterministic) {
  TaskOptions o = opts("baut", "sphere(3)");
  o.range = {1, 6};
  std::string a = render_canonical(run_task(o));
  std::string b = render_canonical(run_task(o));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("seconds"), std::string::npos);
  EXPECT_EQ(Json::parse(a)["meta"]["tool"], "cdgl");
}

TEST(Cli, TableOutputShowsExitCode) {
  TaskOptions o = opts("check", "S1");
  Report r = run_task(o);
  EXPECT_EQ(r.exit_code, 0);
  std::string t = render_table(r);
  EXPECT_NE(t.find("exit"), std::string::npos);
}

TEST(Cli, MissingRangeIsUsageError) {
  Report r = run_task(opts("homology", "sphere(2)"));
  EXPECT_EQ(r.exit_code, 1);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_NE(r.diagnostics[0].get<std::string>().find("--range"), std::string::npos);
}

TEST(Cli, BadRangeRejected) {
  EXPECT_THROW(parse_range("3..x"), Error);
  EXPECT_EQ(parse_range("-1..4"), (std::pair<int, int>{-1, 4}));
}

TEST(Cli, UnknownCommand) {
  EXPECT_EQ(run_task(opts("frobnicate", "S1")).exit_code, 1);
}

TEST(Cli, ParseErrorReportsPosition) {
  TaskOptions o;
  o.command = "check";
  o.file = "bad.cdgl";
  o.file_text = "model S {\n  gen x : 2\n  d x = [x, y]\n}\n";
  Report r = run_task(o);
  EXPECT_EQ(r.exit_code, 1);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0], "3:13: error: unknown generator y");
}

TEST(Cli, ResourceLimitGivesExitTwo) {
  std::size_t old = resource_limit();
  set_resource_limit(5);
  TaskOptions o = opts("homology", "wedge(1,1,1)");
  o.range = {0, 0};
  o.cap = 6;
  Report r = run_task(o);
  set_resource_limit(old);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_TRUE(r.partial);
}

TEST(Cli, CheckIntervalAtCapEight) {
  TaskOptions o = opts("check", "L1");
  o.cap = 8;
  EXPECT_EQ(run_task(o).exit_code, 0);
}

TEST(Cli, GaugeEquivalenceOfIntervalEnds) {
  TaskOptions o = opts("gauge-equiv", "L1");
  o.from = "a";
  o.to = "b";
  o.cap = 6;
  Report r = run_task(o);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["equivalent"], true);
  EXPECT_EQ(r.result["witness"], "-x");
  EXPECT_EQ(r.result["witness_check"], true);
}

TEST(Cli, Bch) {
  TaskOptions o = opts("bch", "wedge(1,1)");
  o.x = "u";
  o.y = "v";
  o.cap = 2;
  Report r = run_task(o);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["bch"], "u + v + 1/2 * [u, v]");
}

TEST(Cli, WitnessVerdictsAndExitCodes) {
  TaskOptions o = file_opts("witness", "circle_wedge_homotopy.cdgl");
  o.homotopy = "H";
  Report good = run_task(o);
  EXPECT_EQ(good.exit_code, 0);
  EXPECT_EQ(good.result["verdict"], true);
  o.homotopy = "Hbad";
  Report bad = run_task(o);
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(bad.result["verdict"], false);
  EXPECT_EQ(bad.result["generator"], "x");
}

TEST(Cli, ExpLogOnWedgeAutomorphism) {
  TaskOptions o = file_opts("log", "wedge_automorphism.cdgl");
  o.model = "W";
  o.morphism = "phi";
  Report r = run_task(o);
  ASSERT_EQ(r.exit_code, 0) << r.diagnostics.dump();
  TaskOptions e = file_opts("exp", "wedge_automorphism.cdgl");
  e.model = "W";
  e.derivation = "nu";
  Report r2 = run_task(e);
  ASSERT_EQ(r2.exit_code, 0) << r2.diagnostics.dump();
}

TEST(Cli, WedgeStabilizerGroup) {
  TaskOptions o = file_opts("baut", "wedge_stabilizer.cdgl");
  o.model = "W33";
  o.gspec = "stabilizer:F";
  o.range = {1, 4};
  Report r = run_task(o);
  ASSERT_EQ(r.exit_code, 0) << r.diagnostics.dump();
  EXPECT_EQ(r.result["h0_der"], 1);
  EXPECT_EQ(r.result["im_h0_ad"], 0);
  EXPECT_EQ(r.result["group"]["dimension"], 1);
  EXPECT_EQ(r.result["group"]["abelian"], true);
}

TEST(Cli, PiMapIdentity) {
  TaskOptions o = file_opts("pi-map", "spheres.cdgl");
  o.morphism = "id3";
  o.range = {0, 6};
  Report r = run_task(o);
  ASSERT_EQ(r.exit_code, 0) << r.diagnostics.dump();
  EXPECT_EQ(r.result["les_exact"], true);
}

TEST(Cli, EveryCommandIsKnown) {
  EXPECT_EQ(task_commands().size(), 12u);
}
