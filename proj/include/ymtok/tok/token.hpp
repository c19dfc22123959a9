#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ymtok {

enum class TokenKind {
  Text,      // a plain unit: a character, word or subword piece
  Space,     // word separator emitted by the character tokenizer
  Segments,  // segment list of a native word, `|`-joined
  Melody,    // tone list of a native word, `|`-joined
  Foreign,   // a word without tones, kept whole
  Boundary,  // punctuation or a morpheme boundary (- =)
  Lemma,     // morphemic form of a word
  Process,   // per-mora tone process such as 3>14
};

struct Token {
  TokenKind kind = TokenKind::Text;
  std::string text;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Whether a token only marks structure. Metrics skip these.
inline bool is_special(TokenKind k) { return k == TokenKind::Space || k == TokenKind::Boundary; }

struct TokenStream {
  std::vector<Token> tokens;

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.text);
    return out;
  }

  /// Space-separated rendering, one utterance per line.
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i].text;
    }
    return out;
  }
};

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > j) out.emplace_back(line.substr(j, i - j));
  }
  return out;
}

/// Counts of the fixes detokenizers make to malformed decoder output.
struct RepairStats {
  std::size_t padded_melodies = 0;     // melody shorter than its segments
  std::size_t truncated_melodies = 0;  // melody longer than its segments
  std::size_t orphan_melodies = 0;     // melody with no segments before it
  std::size_t missing_melodies = 0;    // segments with no melody after them
  std::size_t orphan_processes = 0;    // process with no lemma before it
  std::size_t missing_processes = 0;   // lemma mora without a process
  std::size_t surplus_processes = 0;   // process beyond the lemma's morae
  std::size_t broken_pieces = 0;       // subword piece outside any word

  std::size_t total() const {
    return padded_melodies + truncated_melodies + orphan_melodies + missing_melodies + orphan_processes +
           missing_processes + surplus_processes + broken_pieces;
  }

  RepairStats& operator+=(const RepairStats& o) {
    padded_melodies += o.padded_melodies;
    truncated_melodies += o.truncated_melodies;
    orphan_melodies += o.orphan_melodies;
    missing_melodies += o.missing_melodies;
    orphan_processes += o.orphan_processes;
    missing_processes += o.missing_processes;
    surplus_processes += o.surplus_processes;
    broken_pieces += o.broken_pieces;
    return *this;
  }
};

/// A reversible tokenization scheme.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string name() const = 0;
  virtual TokenStream tokenize(std::string_view line) const = 0;
  virtual std::string detokenize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) const = 0;
};

}  // namespace ymtok
