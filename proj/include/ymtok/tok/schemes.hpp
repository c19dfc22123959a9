#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ymtok/subword/bpe.hpp"
#include "ymtok/tok/procseq.hpp"
#include "ymtok/tok/segmel.hpp"
#include "ymtok/tok/simple.hpp"

namespace ymtok {

inline constexpr std::array<std::string_view, 7> kSchemes = {"char",   "word",       "bpe",        "segmel",
                                                             "procseq", "segmel+bpe", "procseq+bpe"};

inline bool is_scheme(std::string_view s) { return std::find(kSchemes.begin(), kSchemes.end(), s) != kSchemes.end(); }

inline bool uses_bpe(std::string_view scheme) { return scheme.size() >= 3 && scheme.substr(scheme.size() - 3) == "bpe"; }

struct SchemeConfig {
  std::string scheme = "char";
  BpeOptions bpe;
  std::size_t beam = kDefaultBeam;
  ScoreFn scorer;
  /// Shared by procseq schemes; built from the default rules when null.
  std::shared_ptr<const Segmenter> segmenter;
};

namespace scheme_detail {

inline void check(const SchemeConfig& cfg) {
  if (!is_scheme(cfg.scheme)) throw Error(Errc::BadFormat, "unknown scheme '" + cfg.scheme + "'");
}

inline std::shared_ptr<const Segmenter> segmenter_of(const SchemeConfig& cfg) {
  return cfg.segmenter ? cfg.segmenter : std::make_shared<const Segmenter>();
}

}  // namespace scheme_detail

/// The tokenizer under the BPE stage (or the whole tokenizer when the
/// scheme has none). Null for plain "bpe".
inline std::shared_ptr<const Tokenizer> base_tokenizer(const SchemeConfig& cfg) {
  scheme_detail::check(cfg);
  const std::string& s = cfg.scheme;
  if (s == "char") return std::make_shared<CharTokenizer>();
  if (s == "word") return std::make_shared<WordTokenizer>();
  if (s == "segmel" || s == "segmel+bpe") return std::make_shared<SegMelTokenizer>();
  if (s == "procseq" || s == "procseq+bpe")
    return std::make_shared<ProcSeqTokenizer>(scheme_detail::segmenter_of(cfg), cfg.scorer, cfg.beam);
  return nullptr;
}

/// Tokenizer for a scheme. BPE schemes need a merge table.
inline std::shared_ptr<const Tokenizer> make_tokenizer(const SchemeConfig& cfg, std::optional<MergeTable> table = {}) {
  scheme_detail::check(cfg);
  if (!uses_bpe(cfg.scheme)) return base_tokenizer(cfg);
  if (!table) throw Error(Errc::BadFormat, "scheme '" + cfg.scheme + "' needs a BPE model");
  if (cfg.scheme == "bpe") return std::make_shared<BpeTokenizer>(std::move(*table));
  return std::make_shared<AugmentedTokenizer>(base_tokenizer(cfg), std::move(*table));
}

/// Merge table for a BPE scheme trained on `corpus`.
inline MergeTable train_scheme_bpe(const SchemeConfig& cfg, const std::vector<std::string>& corpus) {
  scheme_detail::check(cfg);
  if (!uses_bpe(cfg.scheme)) throw Error(Errc::BadFormat, "scheme '" + cfg.scheme + "' has no BPE stage");
  if (cfg.scheme == "bpe") return bpe_train(corpus, cfg.bpe);
  return train_augmented(*base_tokenizer(cfg), corpus, cfg.bpe);
}

/// make_tokenizer, training the merge table on `corpus` if the scheme needs one.
inline std::shared_ptr<const Tokenizer> train_tokenizer(const SchemeConfig& cfg, const std::vector<std::string>& corpus) {
  if (!uses_bpe(cfg.scheme)) return make_tokenizer(cfg);
  return make_tokenizer(cfg, train_scheme_bpe(cfg, corpus));
}

}  // namespace ymtok
