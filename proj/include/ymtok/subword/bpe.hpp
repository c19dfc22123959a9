#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ymtok/core/error.hpp"
#include "ymtok/core/utf8.hpp"
#include "ymtok/tok/token.hpp"

namespace ymtok {

inline constexpr std::string_view kWordMark = "_";

namespace bpe {

/// Base units of a word: one per character, the first carrying `_`.
inline std::vector<std::string> initial_units(std::string_view word) {
  std::vector<std::string> units;
  for (char32_t c : utf8::decode(word)) units.push_back(utf8::encode(c));
  if (!units.empty()) units.front().insert(0, kWordMark);
  return units;
}

inline bool is_byte_piece(std::string_view p) {
  return p.size() == 6 && p.substr(0, 3) == "<0x" && p.back() == '>' && std::isxdigit(static_cast<unsigned char>(p[3])) &&
         std::isxdigit(static_cast<unsigned char>(p[4]));
}

inline std::string byte_piece(unsigned char b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "<0x%02X>", b);
  return buf;
}

/// Raw text of a piece: byte pieces become their byte.
inline std::string piece_text(std::string_view p) {
  if (is_byte_piece(p)) return std::string(1, static_cast<char>(std::stoi(std::string(p.substr(3, 2)), nullptr, 16)));
  return std::string(p);
}

}  // namespace bpe

/// Ordered merges over a base alphabet of characters and `_`-marked
/// word-initial characters.
class MergeTable {
 public:
  MergeTable() = default;
  MergeTable(std::vector<std::string> alphabet, std::vector<std::string> specials,
             std::vector<std::pair<std::string, std::string>> merges)
      : alphabet_(std::move(alphabet)), specials_(std::move(specials)), merges_(std::move(merges)) {
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    index();
  }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& specials() const { return specials_; }
  const std::vector<std::pair<std::string, std::string>>& merges() const { return merges_; }
  std::size_t vocab_size() const { return alphabet_.size() + specials_.size() + merges_.size(); }

  /// Specials, then the alphabet, then merge results in merge order.
  std::vector<std::string> vocab() const {
    std::vector<std::string> v = specials_;
    v.insert(v.end(), alphabet_.begin(), alphabet_.end());
    for (const auto& [l, r] : merges_) v.push_back(l + r);
    return v;
  }

  /// Pieces for one word. Characters never seen in training fall back to
  /// one `<0xNN>` piece per UTF-8 byte; a word-initial one is preceded by
  /// the byte of `_`.
  std::vector<std::string> encode(std::string_view word) const {
    std::vector<std::string> units;
    for (auto& u : bpe::initial_units(word)) {
      const bool initial = u.rfind(kWordMark, 0) == 0 && units.empty();
      const std::string bare = initial ? u.substr(kWordMark.size()) : u;
      if (chars_.count(bare)) {
        units.push_back(std::move(u));
        continue;
      }
      if (initial) units.push_back(bpe::byte_piece(static_cast<unsigned char>(kWordMark[0])));
      for (unsigned char b : bare) units.push_back(bpe::byte_piece(b));
    }
    while (units.size() > 1) {
      std::size_t best = units.size(), best_rank = merges_.size();
      for (std::size_t i = 0; i + 1 < units.size(); ++i) {
        auto it = ranks_.find({units[i], units[i + 1]});
        if (it != ranks_.end() && it->second < best_rank) {
          best_rank = it->second;
          best = i;
        }
      }
      if (best == units.size()) break;
      units[best] += units[best + 1];
      units.erase(units.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    return units;
  }

  void save(std::ostream& out) const {
    out << "#version: ymtok-bpe 1\n#alphabet:";
    for (const auto& a : alphabet_) out << ' ' << a;
    out << "\n#specials:";
    for (const auto& s : specials_) out << ' ' << s;
    out << '\n';
    for (const auto& [l, r] : merges_) out << l << ' ' << r << '\n';
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    save(out);
  }

  void save_vocab(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    const auto v = vocab();
    for (std::size_t i = 0; i < v.size(); ++i) out << v[i] << '\t' << i << '\n';
  }

  static MergeTable load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "#version: ymtok-bpe 1") throw Error(Errc::BadFormat, "not a ymtok merge table");
    auto fields = [&](std::string_view tag) {
      if (!std::getline(in, line) || line.rfind(tag, 0) != 0) throw Error(Errc::BadFormat, "merge table lacks " + std::string(tag));
      return split_tokens(std::string_view(line).substr(tag.size()));
    };
    auto alphabet = fields("#alphabet:");
    auto specials = fields("#specials:");
    std::vector<std::pair<std::string, std::string>> merges;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto parts = split_tokens(line);
      if (parts.size() != 2) throw Error(Errc::BadFormat, "bad merge line '" + line + "'");
      merges.emplace_back(parts[0], parts[1]);
    }
    return MergeTable(std::move(alphabet), std::move(specials), std::move(merges));
  }

  static MergeTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    return load(in);
  }

 private:
  void index() {
    ranks_.clear();
    chars_.clear();
    for (std::size_t i = 0; i < merges_.size(); ++i) ranks_.emplace(merges_[i], i);
    for (const auto& a : alphabet_) chars_.insert(a.rfind(kWordMark, 0) == 0 ? a.substr(kWordMark.size()) : a);
  }

  std::vector<std::string> alphabet_;
  std::vector<std::string> specials_;
  std::vector<std::pair<std::string, std::string>> merges_;
  std::map<std::pair<std::string, std::string>, std::size_t> ranks_;
  std::set<std::string> chars_;
};

struct BpeOptions {
  std::size_t vocab_size = 500;
  std::vector<std::string> specials = {"<unk>"};
  /// Units containing any of these characters never take part in a merge.
  std::string no_merge_chars;
};

/// Greedy most-frequent-pair training over word counts. Ties go to the
/// lexicographically smaller (left, right) pair. Stops at the vocabulary
/// target or when no pair occurs twice.
inline MergeTable bpe_train_words(const std::map<std::string, std::size_t>& word_counts, const BpeOptions& opt) {
  struct Entry {
    std::vector<std::string> units;
    std::size_t count;
  };
  std::vector<Entry> words;
  std::set<std::string> alphabet;
  for (const auto& [w, n] : word_counts) {
    if (w.empty() || n == 0) continue;
    words.push_back({bpe::initial_units(w), n});
    alphabet.insert(words.back().units.begin(), words.back().units.end());
  }
  const std::size_t floor = alphabet.size() + opt.specials.size();
  if (opt.vocab_size < floor)
    throw Error(Errc::VocabTooSmall, "vocabulary size " + std::to_string(opt.vocab_size) + " is below alphabet plus specials (" +
                                         std::to_string(floor) + ")");

  auto mergeable = [&](const std::string& u) { return u.find_first_of(opt.no_merge_chars) == std::string::npos; };
  std::vector<std::pair<std::string, std::string>> merges;
  while (floor + merges.size() < opt.vocab_size) {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& e : words)
      for (std::size_t i = 0; i + 1 < e.units.size(); ++i)
        if (mergeable(e.units[i]) && mergeable(e.units[i + 1]) && !bpe::is_byte_piece(e.units[i] + e.units[i + 1]))
          counts[{e.units[i], e.units[i + 1]}] += e.count;
    const std::pair<std::string, std::string>* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [p, n] : counts) {
      if (n > best_count) {  // map order makes the first maximum the smallest pair
        best = &p;
        best_count = n;
      }
    }
    if (!best || best_count < 2) break;
    const auto pair = *best;
    merges.push_back(pair);
    for (auto& e : words) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i < e.units.size(); ++i) {
        if (i + 1 < e.units.size() && e.units[i] == pair.first && e.units[i + 1] == pair.second) {
          next.push_back(pair.first + pair.second);
          ++i;
        } else {
          next.push_back(e.units[i]);
        }
      }
      e.units = std::move(next);
    }
  }
  return MergeTable({alphabet.begin(), alphabet.end()}, opt.specials, std::move(merges));
}

/// Trains on whitespace-separated words of the corpus lines.
inline MergeTable bpe_train(const std::vector<std::string>& corpus, const BpeOptions& opt) {
  std::map<std::string, std::size_t> counts;
  for (const auto& line : corpus)
    for (const auto& w : split_tokens(line)) ++counts[w];
  return bpe_train_words(counts, opt);
}

inline MergeTable bpe_train(const std::vector<std::string>& corpus, std::size_t vocab_size) {
  BpeOptions opt;
  opt.vocab_size = vocab_size;
  return bpe_train(corpus, opt);
}

/// Pieces of a whole line.
inline std::vector<std::string> bpe_encode(const MergeTable& t, std::string_view line) {
  std::vector<std::string> out;
  for (const auto& w : split_tokens(line))
    for (auto& p : t.encode(w)) out.push_back(std::move(p));
  return out;
}

/// Groups pieces into words: each `_` begins a new word. Pieces before the
/// first mark form a word of their own and are counted as broken.
inline std::vector<std::string> bpe_decode_words(const std::vector<std::string>& pieces, RepairStats* stats = nullptr) {
  std::string text;
  for (const auto& p : pieces) text += bpe::piece_text(p);
  std::vector<std::string> words;
  std::size_t i = 0;
  if (!text.empty() && text.rfind(kWordMark, 0) != 0) {
    if (stats) ++stats->broken_pieces;
  } else {
    i = kWordMark.size();
  }
  while (i <= text.size()) {
    const auto j = std::min(text.find(kWordMark, i), text.size());
    if (j > i) words.push_back(text.substr(i, j - i));
    i = j + kWordMark.size();
  }
  return words;
}

inline std::string bpe_decode(const std::vector<std::string>& pieces, RepairStats* stats = nullptr) {
  std::string out;
  for (const auto& w : bpe_decode_words(pieces, stats)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

class BpeTokenizer final : public Tokenizer {
 public:
  explicit BpeTokenizer(MergeTable table) : table_(std::move(table)) {}

  std::string name() const override { return "bpe"; }
  const MergeTable& table() const { return table_; }

  TokenStream tokenize(std::string_view line) const override {
    TokenStream ts;
    for (auto& p : bpe_encode(table_, line)) ts.tokens.push_back({TokenKind::Text, std::move(p)});
    return ts;
  }

  std::string detokenize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) const override {
    return bpe_decode(tokens, stats);
  }

 private:
  MergeTable table_;
};

/// Whether augmentation leaves a base token whole.
inline bool is_atomic(TokenKind k) {
  return k == TokenKind::Melody || k == TokenKind::Process || k == TokenKind::Boundary || k == TokenKind::Space;
}

/// Word counts of the subword-processed base tokens of a corpus.
inline std::map<std::string, std::size_t> augment_training_words(const Tokenizer& base, const std::vector<std::string>& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& line : corpus)
    for (const auto& t : base.tokenize(line).tokens)
      if (!is_atomic(t.kind)) ++counts[t.text];
  return counts;
}

/// BPE within each base token. Atomic tokens become a single `_`-marked
/// piece; pieces never span two base tokens.
class AugmentedTokenizer final : public Tokenizer {
 public:
  AugmentedTokenizer(std::shared_ptr<const Tokenizer> base, MergeTable table)
      : base_(std::move(base)), table_(std::move(table)) {}

  std::string name() const override { return base_->name() + "+bpe"; }
  const MergeTable& table() const { return table_; }

  TokenStream tokenize(std::string_view line) const override {
    TokenStream ts;
    for (const auto& t : base_->tokenize(line).tokens) {
      if (is_atomic(t.kind)) {
        ts.tokens.push_back({t.kind, std::string(kWordMark) + t.text});
        continue;
      }
      for (auto& p : table_.encode(t.text)) ts.tokens.push_back({t.kind, std::move(p)});
    }
    return ts;
  }

  std::string detokenize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) const override {
    return base_->detokenize(bpe_decode_words(tokens, stats), stats);
  }

 private:
  std::shared_ptr<const Tokenizer> base_;
  MergeTable table_;
};

inline MergeTable train_augmented(const Tokenizer& base, const std::vector<std::string>& corpus, BpeOptions opt) {
  opt.no_merge_chars += ">";
  return bpe_train_words(augment_training_words(base, corpus), opt);
}

}  // namespace ymtok
