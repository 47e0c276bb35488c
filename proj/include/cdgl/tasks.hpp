#pragma once
#include <optional>
#include <string>
#include <utility>

#include "cdgl/model.hpp"
#include "cdgl/report.hpp"

namespace cdgl {

struct TaskOptions {
  std::string command;
  std::optional<std::string> file;       // path, echoed in the report
  std::optional<std::string> file_text;  // contents of file
  std::string model;                     // model name in the file or a builtin reference
  std::optional<std::pair<int, int>> range;
  std::optional<int> cap;
  int word_cap = 3;
  int poly_cap = kDefaultPolyCap;
  std::string gspec = "identity";
  std::string x, y, mc, from, to, derivation, morphism, homotopy;
  bool stability = true;
};

const std::vector<std::string>& task_commands();
// "a..b"; throws Usage.
std::pair<int, int> parse_range(const std::string& s);

// Exit code 0 on success, 1 on diagnostics or usage errors, 2 on resource limits.
Report run_task(const TaskOptions& opts);

}  // namespace cdgl
