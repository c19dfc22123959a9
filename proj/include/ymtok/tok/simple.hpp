#pragma once

#include "ymtok/core/utf8.hpp"
#include "ymtok/tok/token.hpp"

namespace ymtok {

/// One token per character; `_` stands between words.
class CharTokenizer final : public Tokenizer {
 public:
  std::string name() const override { return "char"; }

  TokenStream tokenize(std::string_view line) const override {
    TokenStream ts;
    for (const auto& w : split_tokens(line)) {
      if (!ts.tokens.empty()) ts.tokens.push_back({TokenKind::Space, "_"});
      for (char32_t c : utf8::decode(w)) ts.tokens.push_back({TokenKind::Text, utf8::encode(c)});
    }
    return ts;
  }

  std::string detokenize(const std::vector<std::string>& tokens, RepairStats* = nullptr) const override {
    std::string out;
    for (const auto& t : tokens) out += t == "_" ? std::string(" ") : t;
    return out;
  }
};

/// Whitespace-delimited words.
class WordTokenizer final : public Tokenizer {
 public:
  std::string name() const override { return "word"; }

  TokenStream tokenize(std::string_view line) const override {
    TokenStream ts;
    for (auto& w : split_tokens(line)) ts.tokens.push_back({TokenKind::Text, std::move(w)});
    return ts;
  }

  std::string detokenize(const std::vector<std::string>& tokens, RepairStats* = nullptr) const override {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }
};

}  // namespace ymtok
