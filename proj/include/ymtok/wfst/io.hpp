#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ymtok/core/utf8.hpp"
#include "ymtok/wfst/wfst.hpp"

namespace ymtok::fst {

// Text format, one record per line, tab separated:
//   # ymtok-wfst states=N start=S
//   src  dst  in  out  weight
//   state  weight
// `<eps>` is the empty label. In labels, backslash, space, tab and newline
// are written \\ \s \t \n; a literal `<eps>` output is written `\<eps>`.

namespace internal {

inline std::string escape_label(std::u32string_view s) {
  if (s.empty()) return "<eps>";
  if (s == U"<eps>") return "\\<eps>";
  std::string out;
  for (char32_t c : s) {
    switch (c) {
      case U'\\': out += "\\\\"; break;
      case U' ': out += "\\s"; break;
      case U'\t': out += "\\t"; break;
      case U'\n': out += "\\n"; break;
      default: utf8::append(out, c);
    }
  }
  return out;
}

inline std::u32string unescape_label(std::string_view s) {
  if (s == "<eps>") return {};
  if (s == "\\<eps>") return U"<eps>";
  std::string raw;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      raw.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case '\\': raw.push_back('\\'); break;
      case 's': raw.push_back(' '); break;
      case 't': raw.push_back('\t'); break;
      case 'n': raw.push_back('\n'); break;
      default: throw Error(Errc::BadFormat, "bad escape in label '" + std::string(s) + "'");
    }
  }
  return utf8::decode(raw);
}

inline std::string format_weight(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_weight(std::string_view s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw Error(Errc::BadFormat, "bad weight '" + std::string(s) + "'");
  return v;
}

inline StateId parse_state(std::string_view s) {
  StateId v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v < 0)
    throw Error(Errc::BadFormat, "bad state id '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > j) out.push_back(line.substr(j, i - j));
  }
  return out;
}

}  // namespace internal

inline void write_text(const Wfst& m, std::ostream& os) {
  os << "# ymtok-wfst states=" << m.num_states() << " start=" << m.start() << '\n';
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& a : m.arcs(s)) {
      os << s << '\t' << a.next << '\t'
         << internal::escape_label(a.ilabel == kEpsilon ? std::u32string() : std::u32string(1, a.ilabel))
         << '\t' << internal::escape_label(a.olabel) << '\t'
         << internal::format_weight(a.weight.value) << '\n';
    }
    if (m.is_final(s)) os << s << '\t' << internal::format_weight(m.final_weight(s).value) << '\n';
  }
}

inline std::string to_text(const Wfst& m) {
  std::ostringstream os;
  write_text(m, os);
  return os.str();
}

inline Wfst read_text(std::istream& is) {
  struct ArcRec {
    StateId src, dst;
    Label in;
    std::u32string out;
    double w;
  };
  std::vector<ArcRec> arcs;
  std::vector<std::pair<StateId, double>> finals;
  StateId declared_states = -1, declared_start = kNoState, max_state = -1, first_state = kNoState;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto f = internal::split_fields(line);
      for (auto field : f) {
        if (field.starts_with("states="))
          declared_states = internal::parse_state(field.substr(7));
        else if (field.starts_with("start="))
          declared_start = field.substr(6) == "-1" ? kNoState : internal::parse_state(field.substr(6));
      }
      continue;
    }
    const auto f = internal::split_fields(line);
    if (f.size() == 5) {
      ArcRec r;
      r.src = internal::parse_state(f[0]);
      r.dst = internal::parse_state(f[1]);
      const auto in = internal::unescape_label(f[2]);
      if (in.size() > 1)
        throw Error(Errc::BadFormat, "line " + std::to_string(lineno) + ": input label must be one symbol");
      r.in = in.empty() ? kEpsilon : in[0];
      r.out = internal::unescape_label(f[3]);
      r.w = internal::parse_weight(f[4]);
      max_state = std::max({max_state, r.src, r.dst});
      if (first_state == kNoState) first_state = r.src;
      arcs.push_back(std::move(r));
    } else if (f.size() == 2) {
      const StateId s = internal::parse_state(f[0]);
      finals.emplace_back(s, internal::parse_weight(f[1]));
      max_state = std::max(max_state, s);
      if (first_state == kNoState) first_state = s;
    } else {
      throw Error(Errc::BadFormat, "line " + std::to_string(lineno) + ": expected 2 or 5 fields");
    }
  }

  Wfst m;
  const StateId n = std::max(declared_states, max_state + 1);
  m.reserve_states(static_cast<std::size_t>(n));
  for (StateId s = 0; s < n; ++s) m.add_state();
  const StateId start = declared_start != kNoState ? declared_start : first_state;
  if (start != kNoState) m.set_start(start);
  for (auto& r : arcs) m.add_arc(r.src, r.in, std::move(r.out), TropicalWeight(r.w), r.dst);
  for (auto [s, w] : finals) m.set_final(s, TropicalWeight(w));
  return m;
}

inline Wfst from_text(const std::string& text) {
  std::istringstream is(text);
  return read_text(is);
}

}  // namespace ymtok::fst
