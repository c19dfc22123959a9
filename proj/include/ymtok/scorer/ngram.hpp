#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "ymtok/core/error.hpp"
#include "ymtok/core/utf8.hpp"
#include "ymtok/scorer/score_request.hpp"

namespace ymtok {

/// Character n-gram model with add-k smoothing.
///
/// Contexts are the last n-1 characters of the prefix, padded on the left
/// with a start symbol. Characters outside the alphabet are scored as the
/// single `<unk>` symbol.
class NgramModel {
 public:
  static constexpr char32_t kStart = U'\x02';
  static constexpr char32_t kUnk = U'\xFFFD';

  /// Characters every model knows: G3 notation, tone digits, the ambiguity
  /// mark and word punctuation.
  static std::u32string base_alphabet() {
    std::u32string a;
    for (char32_t c = U'a'; c <= U'z'; ++c) a.push_back(c);
    a += U"'~1234{}>$-= ";
    return a;
  }

  /// An untrained model: uniform over the alphabet.
  explicit NgramModel(int order = 5, double smoothing = 0.1) : order_(order), k_(smoothing) {
    if (order < 1) throw Error(Errc::BadFormat, "n-gram order must be at least 1");
    if (!(smoothing > 0)) throw Error(Errc::BadFormat, "smoothing must be positive");
    for (char32_t c : base_alphabet()) alphabet_.insert(c);
    alphabet_.insert(kUnk);
  }

  static NgramModel train(const std::vector<std::string>& corpus, int order = 5, double smoothing = 0.1) {
    NgramModel m(order, smoothing);
    bool any = false;
    for (const auto& line : corpus) {
      const auto u = utf8::decode(line);
      if (u.empty()) continue;
      any = true;
      for (char32_t c : u) m.alphabet_.insert(c);
    }
    if (!any) throw Error(Errc::EmptyCorpus, "no training text");
    for (const auto& line : corpus) {
      const auto u = utf8::decode(line);
      if (u.empty()) continue;
      std::u32string ctx(static_cast<std::size_t>(order - 1), kStart);
      for (char32_t c : u) {
        m.add(ctx, c);
        m.shift(ctx, c);
      }
    }
    return m;
  }

  int order() const { return order_; }
  double smoothing() const { return k_; }
  std::size_t alphabet_size() const { return alphabet_.size(); }
  const std::set<char32_t>& alphabet() const { return alphabet_; }

  /// Natural-log probability of `c` after `history` (the full prefix).
  double log_prob(std::u32string_view history, char32_t c) const { return log_prob_ctx(context_of(history), c); }

  /// Sum of per-character log-probabilities of the extension given the
  /// prefix. The source utterance does not condition an n-gram model.
  double score(const ScoreRequest& req) const {
    std::u32string ctx = context_of(req.prefix);
    double lp = 0;
    for (char32_t c : req.extension) {
      lp += log_prob_ctx(ctx, c);
      shift(ctx, c);
    }
    return lp;
  }

  double score(std::u32string_view prefix, std::u32string_view extension) const {
    return score(ScoreRequest{{}, prefix, extension});
  }

  nlohmann::json to_json() const {
    nlohmann::json counts = nlohmann::json::object();
    std::map<std::string, std::map<std::string, std::uint64_t>> sorted;
    for (const auto& [ctx, row] : counts_)
      for (const auto& [c, n] : row) sorted[utf8::encode(ctx)][utf8::encode(c)] = n;
    for (const auto& [ctx, row] : sorted) counts[ctx] = row;
    nlohmann::json alpha = nlohmann::json::array();
    for (char32_t c : alphabet_) alpha.push_back(utf8::encode(c));
    return {{"format", "ymtok-ngram"}, {"version", 1},     {"order", order_},
            {"smoothing", k_},         {"alphabet", alpha}, {"counts", counts}};
  }

  static NgramModel from_json(const nlohmann::json& j) {
    try {
      if (j.value("format", "") != "ymtok-ngram" || j.value("version", 0) != 1)
        throw Error(Errc::BadFormat, "not a ymtok n-gram model");
      NgramModel m(j.at("order").get<int>(), j.at("smoothing").get<double>());
      for (const auto& s : j.at("alphabet")) {
        const auto u = utf8::decode(s.get<std::string>());
        if (u.size() != 1) throw Error(Errc::BadFormat, "alphabet entries must be single characters");
        m.alphabet_.insert(u[0]);
      }
      for (const auto& [ctx, row] : j.at("counts").items()) {
        const auto uctx = utf8::decode(ctx);
        for (const auto& [c, n] : row.items()) {
          const auto uc = utf8::decode(c);
          if (uc.size() != 1) throw Error(Errc::BadFormat, "count keys must be single characters");
          m.counts_[uctx][uc[0]] += n.get<std::uint64_t>();
          m.totals_[uctx] += n.get<std::uint64_t>();
        }
      }
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::BadFormat, std::string("bad model file: ") + e.what());
    }
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    out << to_json().dump() << '\n';
  }

  static NgramModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ScorerUnavailable, "cannot open scorer model " + path);
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::BadFormat, path + ": " + e.what());
    }
  }

 private:
  std::u32string context_of(std::u32string_view history) const {
    const auto n = static_cast<std::size_t>(order_ - 1);
    std::u32string ctx(n, kStart);
    const std::size_t take = std::min(n, history.size());
    for (std::size_t i = 0; i < take; ++i) ctx[n - take + i] = known(history[history.size() - take + i]);
    return ctx;
  }

  void shift(std::u32string& ctx, char32_t c) const {
    if (ctx.empty()) return;
    ctx.erase(ctx.begin());
    ctx.push_back(known(c));
  }

  char32_t known(char32_t c) const { return alphabet_.count(c) ? c : kUnk; }

  void add(const std::u32string& ctx, char32_t c) {
    ++counts_[ctx][known(c)];
    ++totals_[ctx];
  }

  double log_prob_ctx(const std::u32string& ctx, char32_t c) const {
    const double a = static_cast<double>(alphabet_.size());
    double num = k_, den = k_ * a;
    if (auto t = totals_.find(ctx); t != totals_.end()) {
      den += static_cast<double>(t->second);
      const auto& row = counts_.at(ctx);
      if (auto it = row.find(known(c)); it != row.end()) num += static_cast<double>(it->second);
    }
    return std::log(num / den);
  }

  int order_;
  double k_;
  std::set<char32_t> alphabet_;
  std::unordered_map<std::u32string, std::unordered_map<char32_t, std::uint64_t>> counts_;
  std::unordered_map<std::u32string, std::uint64_t> totals_;
};

/// Memoizes scores on (source, prefix, extension). Safe to share between
/// threads.
class CachedScorer {
 public:
  explicit CachedScorer(const NgramModel& model) : model_(&model) {}

  double operator()(const ScoreRequest& req) const {
    std::u32string key;
    key.reserve(req.source.size() + req.prefix.size() + req.extension.size() + 2);
    key.append(req.source).push_back(U'\x01');
    key.append(req.prefix).push_back(U'\x01');
    key.append(req.extension);
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        ++hits_;
        return it->second;
      }
    }
    const double s = model_->score(req);
    std::lock_guard lock(mu_);
    cache_.emplace(std::move(key), s);
    return s;
  }

  ScoreFn fn() const {
    return [this](const ScoreRequest& r) { return (*this)(r); };
  }

  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
  }

 private:
  const NgramModel* model_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::u32string, double> cache_;
  mutable std::size_t hits_ = 0;
};

}  // namespace ymtok
