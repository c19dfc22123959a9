#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ymtok {

// Every failure a module can report. The CLI prints name() on stderr.
enum class Errc {
  EmptyWord,
  UnbalancedBraces,
  EmptyRewrite,
  NoAcceptingPath,
  NoSurvivingPath,
  AlphabetMismatch,
  NegativeWeight,
  MarkerCollision,
  UnboundedPattern,
  BadPattern,
  NonTonalRewrite,
  ScorerUnavailable,
  VocabTooSmall,
  EmptyCorpus,
  LexiconTooSmall,
  DegenerateCorpus,
  EmptyReference,
  BadFormat,
  Io,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyWord: return "EmptyWord";
    case Errc::UnbalancedBraces: return "UnbalancedBraces";
    case Errc::EmptyRewrite: return "EmptyRewrite";
    case Errc::NoAcceptingPath: return "NoAcceptingPath";
    case Errc::NoSurvivingPath: return "NoSurvivingPath";
    case Errc::AlphabetMismatch: return "AlphabetMismatch";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::MarkerCollision: return "MarkerCollision";
    case Errc::UnboundedPattern: return "UnboundedPattern";
    case Errc::BadPattern: return "BadPattern";
    case Errc::NonTonalRewrite: return "NonTonalRewrite";
    case Errc::ScorerUnavailable: return "ScorerUnavailable";
    case Errc::VocabTooSmall: return "VocabTooSmall";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::LexiconTooSmall: return "LexiconTooSmall";
    case Errc::DegenerateCorpus: return "DegenerateCorpus";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::BadFormat: return "BadFormat";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace ymtok
