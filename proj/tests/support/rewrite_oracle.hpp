#pragma once

// Direct left-to-right substitution for rules with literal φ, ψ, λ, ρ.
// The left context is tested against the text produced so far, the right
// context against the untouched input.

#include <string>

namespace ymtok::testing {

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string substitute(const std::string& s, const std::string& phi, const std::string& psi,
                              const std::string& left, const std::string& right) {
  std::string out;
  if (phi.empty()) {
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (s.compare(i, right.size(), right) == 0 && ends_with(out, left)) out += psi;
      if (i < s.size()) out += s[i];
    }
    return out;
  }
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, phi.size(), phi) == 0 && s.compare(i + phi.size(), right.size(), right) == 0 &&
        ends_with(out, left)) {
      out += psi;
      i += phi.size();
    } else {
      out += s[i++];
    }
  }
  return out;
}

}  // namespace ymtok::testing
