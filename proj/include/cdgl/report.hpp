#pragma once
#include <string>

#include "json.hpp"
#include "cdgl/chain_complex.hpp"
#include "cdgl/free_lie.hpp"

namespace cdgl {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

Json rat_json(const Rat& r);
Json vec_json(const SparseVec& v);
Json meta_json(const Meta& m);

struct Report {
  std::string command;
  Json meta = Json::object();
  Json result = Json::object();
  Json diagnostics = Json::array();
  bool partial = false;
  int exit_code = 0;
  double seconds = 0;
};

// Sorted keys, two-space indent, no timing: identical inputs give identical text.
std::string render_canonical(const Report& r);
std::string render_table(const Report& r);

}  // namespace cdgl
