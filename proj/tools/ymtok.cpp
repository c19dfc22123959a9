// ymtok: tokenize, segment, train and evaluate from the command line.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ymtok/metrics/asr.hpp"
#include "ymtok/metrics/morph_f1.hpp"
#include "ymtok/metrics/sparsity.hpp"
#include "ymtok/scorer/ngram.hpp"
#include "ymtok/tok/schemes.hpp"
#include "ymtok/wfst/io.hpp"

using namespace ymtok;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Job {
  std::string input = "-";
  std::string output = "-";
  std::string scheme = "char";
  std::size_t vocab_size = 500;
  std::size_t beam = kDefaultBeam;
  std::string scorer;
  std::string rules;
  std::string bpe_model;
  std::string lexicon;
  std::string corpus;
  std::string ref;
  std::string hyp;
  std::string vocab_out;
  std::string lattice;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  int order = 5;
  double smoothing = 0.1;
  bool exhaustive = false;
  std::vector<std::size_t> split{650, 650, 2000};
};

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> out;
  auto slurp = [&](std::istream& in) {
    for (std::string l; std::getline(in, l);) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      out.push_back(std::move(l));
    }
  };
  if (path == "-") {
    slurp(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    slurp(in);
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw Error(Errc::Io, "cannot write " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// Applies fn to every line on `jobs` threads; results keep input order.
// The first failing line (by position) decides the error.
template <class Fn>
auto map_lines(const std::vector<std::string>& lines, unsigned jobs, Fn fn) {
  using R = decltype(fn(lines[0], std::size_t{0}));
  std::vector<R> out(lines.size());
  std::vector<std::exception_ptr> errors(lines.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < lines.size();) {
      try {
        out[i] = fn(lines[i], i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(lines.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string rules_path(const Job& job) {
  if (!job.rules.empty()) return job.rules;
  if (const char* env = std::getenv("YMTOK_RULES"); env && *env) return env;
  return {};
}

std::shared_ptr<const Segmenter> load_segmenter(const Job& job) {
  const auto path = rules_path(job);
  return std::make_shared<const Segmenter>(path.empty() ? default_morph_rules() : load_morph_rules(path));
}

// Keeps the scorer model alive for as long as the ScoreFn is used.
struct ScorerHandle {
  std::shared_ptr<NgramModel> model;
  std::shared_ptr<CachedScorer> cache;
  ScoreFn fn;
};

ScorerHandle load_scorer(const Job& job) {
  ScorerHandle h;
  if (job.scorer.empty()) return h;
  h.model = std::make_shared<NgramModel>(NgramModel::load(job.scorer));
  h.cache = std::make_shared<CachedScorer>(*h.model);
  h.fn = [c = h.cache](const ScoreRequest& r) { return (*c)(r); };
  return h;
}

SchemeConfig scheme_config(const Job& job, const ScorerHandle& scorer) {
  if (!is_scheme(job.scheme)) throw UsageError("unknown scheme '" + job.scheme + "'");
  SchemeConfig cfg;
  cfg.scheme = job.scheme;
  cfg.beam = job.beam;
  cfg.bpe.vocab_size = job.vocab_size;
  cfg.scorer = scorer.fn;
  if (job.scheme.starts_with("procseq")) cfg.segmenter = load_segmenter(job);
  return cfg;
}

std::shared_ptr<const Tokenizer> load_tokenizer(const Job& job, const ScorerHandle& scorer) {
  const auto cfg = scheme_config(job, scorer);
  if (!uses_bpe(job.scheme)) return make_tokenizer(cfg);
  if (job.bpe_model.empty()) throw UsageError("scheme '" + job.scheme + "' needs --bpe-model");
  return make_tokenizer(cfg, MergeTable::load(job.bpe_model));
}

void report_repairs(const RepairStats& rs) {
  if (rs.total() == 0) return;
  std::cerr << "repairs: " << rs.total() << " (padded_melodies=" << rs.padded_melodies
            << " truncated_melodies=" << rs.truncated_melodies << " orphan_melodies=" << rs.orphan_melodies
            << " missing_melodies=" << rs.missing_melodies << " orphan_processes=" << rs.orphan_processes
            << " missing_processes=" << rs.missing_processes << " surplus_processes=" << rs.surplus_processes
            << " broken_pieces=" << rs.broken_pieces << ")\n";
}

int cmd_tokenize(const Job& job) {
  const auto scorer = load_scorer(job);
  const auto tok = load_tokenizer(job, scorer);
  const auto lines = read_lines(job.input);
  const auto out = map_lines(lines, job.jobs, [&](const std::string& l, std::size_t) { return tok->tokenize(l).str(); });
  Output o(job.output);
  for (const auto& l : out) o.get() << l << '\n';
  return 0;
}

int cmd_detokenize(const Job& job) {
  const auto tok = load_tokenizer(job, {});
  const auto lines = read_lines(job.input);
  std::vector<RepairStats> stats(lines.size());
  const auto out = map_lines(lines, job.jobs, [&](const std::string& l, std::size_t i) {
    return tok->detokenize(split_tokens(l), &stats[i]);
  });
  Output o(job.output);
  for (const auto& l : out) o.get() << l << '\n';
  RepairStats total;
  for (const auto& s : stats) total += s;
  report_repairs(total);
  return 0;
}

int cmd_segment(const Job& job) {
  const auto scorer = load_scorer(job);
  const auto seg = load_segmenter(job);
  const auto lines = read_lines(job.input);
  const auto out = map_lines(lines, job.jobs, [&](const std::string& l, std::size_t) {
    return seg->segment(l, job.beam, scorer.fn);
  });
  Output o(job.output);
  for (const auto& l : out) o.get() << l << '\n';
  return 0;
}

int cmd_train_bpe(const Job& job) {
  if (!uses_bpe(job.scheme)) throw UsageError("train-bpe needs a bpe scheme, not '" + job.scheme + "'");
  const auto scorer = load_scorer(job);
  const auto table = train_scheme_bpe(scheme_config(job, scorer), read_lines(job.input));
  Output o(job.output);
  table.save(o.get());
  if (!job.vocab_out.empty()) table.save_vocab(job.vocab_out);
  std::cerr << "merges: " << table.merges().size() << " vocab: " << table.vocab_size() << '\n';
  return 0;
}

int cmd_train_scorer(const Job& job) {
  if (job.order < 1) throw UsageError("--order must be at least 1");
  if (job.output == "-") throw UsageError("train-scorer needs -o");
  NgramModel::train(read_lines(job.input), job.order, job.smoothing).save(job.output);
  return 0;
}

int cmd_transform(const Job& job) {
  if (job.lexicon.empty()) throw UsageError("transform-corpus needs --lexicon");
  const auto out = transform_corpus(read_lines(job.input), Lexicon::load(job.lexicon));
  Output o(job.output);
  for (const auto& l : out) o.get() << l << '\n';
  return 0;
}

int cmd_eval_tok(const Job& job) {
  if (job.lexicon.empty() && job.corpus.empty()) throw UsageError("eval-tok needs --lexicon, --corpus or both");
  if (job.split.size() != 3) throw UsageError("--split takes three counts");
  const auto scorer = load_scorer(job);
  const auto tok = load_tokenizer(job, scorer);
  json report{{"scheme", job.scheme}};
  if (!job.lexicon.empty()) {
    MorphF1Options opt;
    opt.same_entry = job.split[0];
    opt.same_inflection = job.split[1];
    opt.cross_group = job.split[2];
    opt.seed = job.seed;
    opt.exhaustive = job.exhaustive;
    const auto r = morph_f1(*tok, InflectionLexicon::load(job.lexicon), opt);
    report["morph_f1"] = {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn}, {"f1", r.f1}, {"pairs", r.pairs.size()}};
  }
  if (!job.corpus.empty()) report["sparsity"] = sparsity(*tok, read_lines(job.corpus));
  Output o(job.output);
  o.get() << report.dump(2) << '\n';
  return 0;
}

int cmd_eval_asr(const Job& job) {
  if (job.ref.empty() || job.hyp.empty()) throw UsageError("eval-asr needs --ref and --hyp");
  const auto ref = read_lines(job.ref);
  const auto hyp = read_lines(job.hyp);
  if (ref.size() != hyp.size())
    throw Error(Errc::BadFormat, "reference has " + std::to_string(ref.size()) + " lines, hypothesis " + std::to_string(hyp.size()));
  ErrorCount chars, words;
  json lines = json::array();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const auto c = char_errors(ref[i], hyp[i]);
    const auto w = word_errors(ref[i], hyp[i]);
    chars += c;
    words += w;
    json row{{"line", i + 1}, {"char_edits", c.edits}, {"chars", c.ref_length}, {"word_edits", w.edits}, {"words", w.ref_length}};
    row["cer"] = c.ref_length ? json(c.rate()) : json(nullptr);
    row["wer"] = w.ref_length ? json(w.rate()) : json(nullptr);
    lines.push_back(row);
  }
  const json report{{"cer", chars.rate()}, {"wer", words.rate()}, {"lines", lines}};
  Output o(job.output);
  o.get() << report.dump(2) << '\n';
  return 0;
}

int cmd_build_fst(const Job& job) {
  const auto seg = load_segmenter(job);
  Output o(job.output);
  if (!job.lattice.empty()) {
    for (const auto& c : seg->candidates(job.lattice)) o.get() << c.g3 << '\t' << fst::internal::format_weight(c.cost) << '\n';
    return 0;
  }
  fst::write_text(seg->word_fst(), o.get());
  return 0;
}

// Values from --config fill every option not given on the command line.
void apply_config(CLI::App& app, CLI::App& sub, const json& cfg) {
  if (!cfg.is_object()) throw Error(Errc::BadFormat, "config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    for (CLI::App* a : {&sub, &app}) {
      try {
        opt = a->get_option("--" + key);
        break;
      } catch (const CLI::OptionNotFound&) {
      }
    }
    if (!opt) throw UsageError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    auto add = [&](const json& v) { opt->add_result(v.is_string() ? v.get<std::string>() : v.dump()); };
    if (value.is_array()) {
      for (const auto& v : value) add(v);
    } else {
      add(value);
    }
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tonal-morphology-aware tokenizers for Yoloxóchitl Mixtec"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Job job;
  std::string config;
  app.add_option("--config", config, "JSON file with option values (keys are long option names)");
  app.add_option("-j,--jobs", job.jobs, "Worker threads for line-parallel commands")->check(CLI::PositiveNumber);

  auto io = [&](CLI::App* s) {
    s->add_option("-i,--input", job.input, "Input file, - for stdin");
    s->add_option("-o,--output", job.output, "Output file, - for stdout");
  };
  auto scheme = [&](CLI::App* s) {
    s->add_option("-s,--scheme", job.scheme, "char, word, bpe, segmel, procseq, segmel+bpe or procseq+bpe");
    s->add_option("--bpe-model", job.bpe_model, "Merge table for bpe schemes");
  };
  auto procseq = [&](CLI::App* s) {
    s->add_option("--rules", job.rules, "Morphology rule file (default: $YMTOK_RULES, then built-in rules)");
    s->add_option("--scorer", job.scorer, "Scorer model from train-scorer");
    s->add_option("-k,--beam", job.beam, "Beam width")->check(CLI::PositiveNumber);
  };

  std::map<CLI::App*, int (*)(const Job&)> commands;
  auto add = [&](const char* name, const char* desc, int (*fn)(const Job&)) {
    CLI::App* s = app.add_subcommand(name, desc);
    commands[s] = fn;
    return s;
  };

  auto* tok = add("tokenize", "Tokenize lines", cmd_tokenize);
  io(tok), scheme(tok), procseq(tok);
  auto* detok = add("detokenize", "Rebuild lines from tokens; repairs go to stderr", cmd_detokenize);
  io(detok), scheme(detok), procseq(detok);
  auto* seg = add("segment", "Write the chosen G3 segmentation of each line", cmd_segment);
  io(seg), procseq(seg);
  auto* tbpe = add("train-bpe", "Train a merge table", cmd_train_bpe);
  io(tbpe), procseq(tbpe);
  tbpe->add_option("-s,--scheme", job.scheme, "bpe, segmel+bpe or procseq+bpe")->default_val("bpe");
  tbpe->add_option("--vocab-size", job.vocab_size, "Target vocabulary size");
  tbpe->add_option("--vocab", job.vocab_out, "Also write the vocabulary (token<TAB>id)");
  auto* tsc = add("train-scorer", "Train the character n-gram scorer", cmd_train_scorer);
  io(tsc);
  tsc->add_option("--order", job.order, "n-gram order");
  tsc->add_option("--smoothing", job.smoothing, "add-k constant")->check(CLI::NonNegativeNumber);
  auto* tr = add("transform-corpus", "Replace words by their licensed segmentation", cmd_transform);
  io(tr);
  tr->add_option("--lexicon", job.lexicon, "TSV surface<TAB>g3");
  auto* etok = add("eval-tok", "Morph-F1 and sparsity report (JSON)", cmd_eval_tok);
  etok->add_option("-o,--output", job.output, "Report file, - for stdout");
  scheme(etok), procseq(etok);
  etok->add_option("--lexicon", job.lexicon, "TSV lexeme<TAB>root<TAB>cell<TAB>form");
  etok->add_option("--corpus", job.corpus, "Corpus for sparsity");
  etok->add_option("--seed", job.seed, "Sampling seed");
  etok->add_option("--split", job.split, "Pairs per group: same entry, same cell, cross")->expected(3);
  etok->add_flag("--exhaustive", job.exhaustive, "Score every pair instead of sampling");
  auto* easr = add("eval-asr", "CER and WER report (JSON)", cmd_eval_asr);
  easr->add_option("--ref", job.ref, "Reference lines");
  easr->add_option("--hyp", job.hyp, "Hypothesis lines");
  easr->add_option("-o,--output", job.output, "Report file, - for stdout");
  auto* bfst = add("build-fst", "Write the word segmentation FST as text", cmd_build_fst);
  bfst->add_option("-o,--output", job.output, "Output file, - for stdout");
  bfst->add_option("--rules", job.rules, "Morphology rule file");
  bfst->add_option("--lattice", job.lattice, "Print the candidates of one word instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!config.empty()) apply_config(app, *sub, rewrite::read_json_file(config));
    return commands.at(sub)(job);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
