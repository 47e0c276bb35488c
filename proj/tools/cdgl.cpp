#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "cdgl/tasks.hpp"

using namespace cdgl;

int main(int argc, char** argv) {
  CLI::App app{"cdgl: exact computations with complete differential graded Lie algebras"};
  app.require_subcommand(1);
  app.fallthrough();

  TaskOptions o;
  std::string file, range, format = "table";
  std::optional<int> cap;
  app.add_option("--model", o.model, "model name in the file, or a builtin such as sphere(2)");
  app.add_option("--range", range, "degree window a..b");
  app.add_option("--truncate", cap, "bracket-length cap N");
  app.add_option("--word-cap", o.word_cap, "word-length cap of the chain coalgebra");
  app.add_option("--poly-cap", o.poly_cap, "polynomial degree cap for homotopies");
  app.add_option("--gspec", o.gspec, "identity | stabilizer:<filtration> | span:<derivations>");
  app.add_option("--format", format, "table or canonical")->check(CLI::IsMember({"table", "canonical"}));
  app.add_option("--x", o.x, "degree 0 element");
  app.add_option("--y", o.y, "degree 0 element");
  app.add_option("--mc", o.mc, "Maurer-Cartan element (name or expression)");
  app.add_option("--from", o.from, "source Maurer-Cartan element");
  app.add_option("--to", o.to, "target Maurer-Cartan element");
  app.add_option("--derivation", o.derivation, "derivation name");
  app.add_option("--morphism", o.morphism, "morphism name");
  app.add_option("--homotopy", o.homotopy, "homotopy name");
  bool no_stability = false;
  app.add_flag("--no-stability", no_stability, "skip the rerun at cap + 1");

  const std::map<std::string, std::string> help = {
      {"check", "validate a model: d squared, declared MC elements, morphisms"},
      {"homology", "homology of the underlying complex in --range"},
      {"bch", "Baker-Campbell-Hausdorff product of --x and --y"},
      {"gauge", "gauge action of --x on the MC element --mc"},
      {"gauge-equiv", "decide gauge equivalence of --from and --to"},
      {"exp", "exponential of --derivation"},
      {"log", "logarithm of the automorphism --morphism"},
      {"h0", "the group H0 with its BCH law"},
      {"pi-map", "homotopy groups of the mapping space component of --morphism"},
      {"baut", "rational homotopy of the classifying space, free version"},
      {"bautstar", "rational homotopy of the classifying space, pointed version"},
      {"witness", "verify the homotopy --homotopy"},
  };
  for (const auto& cmd : task_commands()) {
    auto it = help.find(cmd);
    auto* sub = app.add_subcommand(cmd, it == help.end() ? "" : it->second);
    sub->add_option("file", file, "model file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  o.command = app.get_subcommands().front()->get_name();
  o.cap = cap;
  o.stability = !no_stability;

  Report rep;
  try {
    if (!range.empty()) o.range = parse_range(range);
    if (!file.empty()) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw Error(ErrorKind::Usage, "cannot read " + file);
      std::ostringstream ss;
      ss << in.rdbuf();
      o.file = file;
      o.file_text = ss.str();
    }
    rep = run_task(o);
  } catch (const Error& e) {
    rep.command = o.command;
    rep.diagnostics.push_back(std::string(error_kind_name(e.kind())) + ": " + e.what());
    rep.exit_code = 1;
  }
  std::cout << (format == "canonical" ? render_canonical(rep) : render_table(rep));
  for (const auto& d : rep.diagnostics) std::cerr << d.get<std::string>() << "\n";
  return rep.exit_code;
}
