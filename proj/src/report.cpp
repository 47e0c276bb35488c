#include "cdgl/report.hpp"

#include <cstdio>
#include <sstream>

namespace cdgl {

Json rat_json(const Rat& r) { return to_string(r); }

Json vec_json(const SparseVec& v) {
  Json j = Json::object();
  for (const auto& [k, x] : v) j[std::to_string(k)] = rat_json(x);
  return j;
}

Json meta_json(const Meta& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::string render_canonical(const Report& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["meta"] = r.meta;
  j["result"] = r.result;
  j["diagnostics"] = r.diagnostics;
  j["partial"] = r.partial;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

namespace {

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_flat(const Json& v) {
  if (!v.is_object() && !v.is_array()) return true;
  for (const auto& x : v)
    if (x.is_object() || x.is_array()) return false;
  return v.size() <= 8;
}

std::string flat(const Json& v) {
  if (!v.is_object() && !v.is_array()) return scalar(v);
  std::string s = v.is_array() ? "[" : "{";
  bool first = true;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!first) s += ", ";
    first = false;
    if (v.is_object()) s += it.key() + ": ";
    s += scalar(*it);
  }
  return s + (v.is_array() ? "]" : "}");
}

void walk(std::ostringstream& os, const std::string& key, const Json& v, int indent) {
  std::string pad(indent, ' ');
  if (v.is_string() && v.get<std::string>().find('\n') != std::string::npos) {
    os << pad << key << ": |\n";
    std::istringstream lines(v.get<std::string>());
    for (std::string l; std::getline(lines, l);) os << pad << "    " << l << "\n";
    return;
  }
  if (is_flat(v)) {
    os << pad << key << (key.empty() ? "" : ": ") << flat(v) << "\n";
    return;
  }
  if (!key.empty()) os << pad << key << ":\n";
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) walk(os, "- " + std::to_string(i), v[i], indent + 2);
    return;
  }
  for (auto it = v.begin(); it != v.end(); ++it) walk(os, it.key(), *it, indent + 2);
}

}  // namespace

std::string render_table(const Report& r) {
  std::ostringstream os;
  os << "command: " << r.command << "\n";
  walk(os, "meta", r.meta, 0);
  walk(os, "result", r.result, 0);
  for (const auto& d : r.diagnostics) os << "diagnostic: " << scalar(d) << "\n";
  if (r.partial) os << "partial: true\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
  os << "exit code: " << r.exit_code << "\n";
  os << "time: " << buf << " s\n";
  return os.str();
}

}  // namespace cdgl
