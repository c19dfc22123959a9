#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ymtok/rewrite/rule_io.hpp"

namespace ymtok {

/// One way a surface word can be analysed: words matching `filter` are
/// rewritten by `rules`, in order, from surface form to G3. The rules run
/// surface to G3, so each one maps a surface tone to its rewrite, e.g.
/// 14 → {3>14} on the first mora.
struct MorphProcess {
  std::string name;
  std::string filter;
  std::vector<rewrite::RewriteRule> rules;
  double weight = 1.0;
};

struct MorphRuleSet {
  /// Cost of leaving a word unanalysed.
  double identity_weight = 0.5;
  std::vector<MorphProcess> processes;
};

namespace morph {

// Building blocks for filters and contexts over surface words.
inline const std::string kSeg = "[a-z'~]+";
inline const std::string kTone = "[1-4]{1,3}";
inline const std::string kMora = "[a-z'~]+[1-4]{1,3}";
// Second-mora segments: CVV stems continue with a bare vowel (plus n),
// every other shape counts as CVCV.
inline const std::string kCvv = "[aeiou]n?";
inline const std::string kCvcv = "([b-df-hj-np-tv-z~'][a-z'~]*|[aeiou]([a-mo-z'~][a-z'~]*|n[a-z'~]+))";

// Tone of the first mora; the context tolerates nothing but letters.
inline rewrite::RewriteRule first(const std::string& surface, const std::string& g3) {
  return {surface, g3, "^" + kSeg, "[a-z'~]", 0.0};
}

// Tone of the second and last mora. The left context may already hold a
// rewritten first tone.
inline rewrite::RewriteRule second(const std::string& surface, const std::string& g3) {
  return {surface, g3, "^" + kSeg + "[1-4{}>]+" + kSeg, "$", 0.0};
}

inline std::string bimoraic(const std::string& t1, const std::string& s2, const std::string& t2) {
  return kSeg + t1 + s2 + t2;
}

// Two or more morae after a first mora with tone t1.
inline std::string polymoraic(const std::string& t1) { return kSeg + t1 + "(" + kMora + ")+"; }

// Three or four morae.
inline std::string long_word(const std::string& t1) { return kSeg + t1 + "(" + kMora + "){2,3}"; }

}  // namespace morph

/// The built-in analyses: negation, completive, the habitual classes,
/// detransitive, noun-to-adjective, the negated completive prefix and the
/// irregular ke1nu3u3.
inline MorphRuleSet default_morph_rules() {
  using namespace morph;
  MorphRuleSet rs;
  auto add = [&](std::string name, std::string filter, std::vector<rewrite::RewriteRule> rules) {
    rs.processes.push_back({std::move(name), std::move(filter), std::move(rules), 1.0});
  };
  // Tones a second mora keeps when the habitual does not push: anything but
  // a plain 3 or 4.
  const std::string keep = "([12]|[1-4]{2,3})";

  add("NEG:3", polymoraic("14"), {first("14", "{3>14}")});
  add("NEG:1", polymoraic("14"), {first("14", "1{>4}")});
  add("NEG:14", polymoraic("4"), {first("4", "{1>}4")});
  add("CPL:3", polymoraic("13"), {first("13", "{>1}3")});
  add("CPL:4", polymoraic("14"), {first("14", "{>1}4")});

  add("HAB:1", "(" + bimoraic("4", kSeg, keep) + "|" + long_word("4") + ")", {first("4", "{1>4}")});
  add("HAB:3", "(" + kSeg + "4(" + kCvcv + kTone + "|" + kCvv + keep + ")|" + long_word("4") + ")",
      {first("4", "{3>4}")});
  add("HAB:1-3", bimoraic("4", kSeg, "13"), {first("4", "{1>4}"), second("13", "{>1}3")});
  add("HAB:1-4", bimoraic("4", kSeg, "14"), {first("4", "{1>4}"), second("14", "{>1}4")});
  add("HAB:3-3", bimoraic("4", kCvv, "4"), {first("4", "{3>4}"), second("4", "{3>4}")});
  add("HAB:3-4", bimoraic("4", kCvv, "24"), {first("4", "{3>4}"), second("24", "{>2}4")});

  add("DETR", polymoraic("1"), {first("1", "{3>1}")});
  add("DETR+HAB", "(" + bimoraic("4", kSeg, keep) + "|" + long_word("4") + ")", {first("4", "{3>1>4}")});
  add("DETR+HAB:3", bimoraic("4", kSeg, "13"), {first("4", "{3>1>4}"), second("13", "{>1}3")});
  add("DETR+HAB:4", bimoraic("4", kSeg, "14"), {first("4", "{3>1>4}"), second("14", "{>1}4")});

  add("N>ADJ", polymoraic("4"), {first("4", "{1>4}")});

  // The completive prefix under negation, written before `-`.
  add("CPL.NEG", "ni14", {{"14", "1{>4}", "^ni", "$", 0.0}});
  add("CPL.NEG:ba", "ni4", {{"4", "{1>4}", "^ni", "$", 0.0}});

  // Irregular pushes on a trimoraic root.
  add("HAB:ke1nu3u3", "ke4nu1u3", {{"ke4nu1u3", "ke{1>4}nu{3>1}u3", "^", "$", 0.0}});
  add("NEG:ke1nu3u3", "ke14nu1u3", {{"ke14nu1u3", "ke1{>4}nu{3>1}u3", "^", "$", 0.0}});
  return rs;
}

inline nlohmann::json morph_rules_to_json(const MorphRuleSet& rs) {
  nlohmann::json procs = nlohmann::json::array();
  for (const auto& p : rs.processes)
    procs.push_back({{"name", p.name}, {"filter", p.filter}, {"weight", p.weight}, {"rules", rewrite::rules_to_json(p.rules)}});
  return {{"identity_weight", rs.identity_weight}, {"processes", procs}};
}

inline MorphRuleSet morph_rules_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("processes")) throw Error(Errc::BadFormat, "rule set must be an object with 'processes'");
  MorphRuleSet rs;
  try {
    rs.identity_weight = j.value("identity_weight", 0.5);
    for (const auto& p : j.at("processes")) {
      MorphProcess mp;
      mp.name = p.value("name", "");
      mp.filter = p.at("filter").get<std::string>();
      mp.weight = p.value("weight", 1.0);
      mp.rules = rewrite::rules_from_json(p.at("rules"));
      if (mp.weight < 0) throw Error(Errc::NegativeWeight, "process weight must be non-negative");
      rs.processes.push_back(std::move(mp));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadFormat, std::string("bad rule set: ") + e.what());
  }
  if (rs.identity_weight < 0) throw Error(Errc::NegativeWeight, "identity weight must be non-negative");
  return rs;
}

inline MorphRuleSet load_morph_rules(const std::string& path) { return morph_rules_from_json(rewrite::read_json_file(path)); }

inline void save_morph_rules(const MorphRuleSet& rs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << morph_rules_to_json(rs).dump(2) << '\n';
}

}  // namespace ymtok
