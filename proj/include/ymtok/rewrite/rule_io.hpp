#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ymtok/rewrite/compile.hpp"

namespace ymtok::rewrite {

// Rule files are JSON arrays of {"phi", "psi", "left", "right", "weight"};
// every field except phi is optional.

inline RewriteRule rule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("phi")) throw Error(Errc::BadFormat, "rule must be an object with a 'phi' field");
  RewriteRule r;
  try {
    r.phi = j.at("phi").get<std::string>();
    r.psi = j.value("psi", "");
    r.left = j.value("left", "");
    r.right = j.value("right", "");
    r.weight = j.value("weight", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadFormat, std::string("bad rule field: ") + e.what());
  }
  for (const auto* s : {&r.phi, &r.psi, &r.left, &r.right}) require_no_markers(utf8::decode(*s), "rule");
  return r;
}

inline nlohmann::json rule_to_json(const RewriteRule& r) {
  return {{"phi", r.phi}, {"psi", r.psi}, {"left", r.left}, {"right", r.right}, {"weight", r.weight}};
}

inline std::vector<RewriteRule> rules_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::BadFormat, "rule file must hold a JSON array");
  std::vector<RewriteRule> out;
  for (const auto& item : j) out.push_back(rule_from_json(item));
  return out;
}

inline nlohmann::json rules_to_json(const std::vector<RewriteRule>& rules) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rules) j.push_back(rule_to_json(r));
  return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::BadFormat, path + ": " + e.what());
  }
}

inline std::vector<RewriteRule> load_rules(const std::string& path) { return rules_from_json(read_json_file(path)); }

inline void save_rules(const std::vector<RewriteRule>& rules, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << rules_to_json(rules).dump(2) << '\n';
}

}  // namespace ymtok::rewrite
