// Command-line front end: one subcommand per pipeline stage plus a `pipeline`
// driver exposing the system presets.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paramorph/config.hpp"
#include "paramorph/pipeline.hpp"

namespace fs = std::filesystem;
using namespace paramorph;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

std::vector<Sentence> read_sentences(const std::string& path) {
  std::vector<Sentence> out;
  auto lines = detail::read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n)
    out.push_back(parse_sentence(lines[n], n + 1, path));
  return out;
}

std::vector<double> parse_weights(const std::string& spec) {
  std::vector<double> w;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      w.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad weight value '" + item + "'");
    }
  }
  return w;
}

struct CommonOpts {
  std::string config_path;
  std::string vocab_path;

  PipelineOptions options() const {
    PipelineOptions opts;
    if (!config_path.empty())
      apply_pipeline_config_json(load_config_file(config_path), opts);
    if (!vocab_path.empty()) opts.rules.vocab = load_vocab(vocab_path);
    return opts;
  }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path, "JSON configuration file");
  cmd->add_option("--vocab", c.vocab_path,
                  "attested-word list, one word per line (overrides config)");
}

RuleConfig rules_with_corpus_vocab(RuleConfig rules,
                                   const BitextCorpus& train) {
  if (rules.vocab.empty())
    for (const std::string& w : source_vocabulary(train)) rules.vocab.insert(w);
  return rules;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "paramorph: paraphrase-based treatment of derivational morphology for "
      "machine translation"};
  app.require_subcommand(1);

  // ---- analyze ----------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "print the simpler forms generated for one word");
  std::string an_word;
  bool an_tags = false;
  CommonOpts an_common;
  analyze->add_option("--word", an_word, "word to analyze")->required();
  analyze->add_flag("--tags", an_tags, "also print the generating rule tags");
  add_common(analyze, an_common);
  analyze->callback([&] {
    PipelineOptions opts = an_common.options();
    RuleConfig a = opts.rules, b = RuleConfig::stemmer_profile();
    b.vocab = a.vocab;
    ParaphraseSet set = generate_forms_union(an_word, {a, b});
    for (const FormVariant& v : set.variants) {
      std::cout << v.surface();
      if (an_tags) {
        std::cout << '\t';
        bool first = true;
        for (Rule r : v.rules) {
          if (!first) std::cout << ',';
          std::cout << rule_name(r);
          first = false;
        }
      }
      std::cout << '\n';
    }
  });

  // ---- align ------------------------------------------------------------
  auto* align = app.add_subcommand(
      "align", "word-align a bitext (EM + Viterbi + intersect+grow)");
  std::string al_src, al_tgt, al_out;
  int al_iters = 10;
  align->add_option("--source", al_src, "source-side file")->required();
  align->add_option("--target", al_tgt, "target-side file")->required();
  align->add_option("--out", al_out, "output alignment file")->required();
  align->add_option("--iterations", al_iters, "EM iterations");
  align->callback([&] {
    BitextCorpus corpus = read_bitext(al_src, al_tgt);
    BitextCorpus aligned = align_corpus(corpus, al_iters);
    auto out = open_out(al_out);
    for (const SentencePair& pair : aligned.pairs)
      out << format_alignment(*pair.alignment) << '\n';
  });

  // ---- pivot-words ------------------------------------------------------
  auto* pivotw = app.add_subcommand(
      "pivot-words", "dump word-level paraphrase probabilities Pr(w'|w)");
  std::string pw_src, pw_tgt, pw_aln, pw_out;
  CommonOpts pw_common;
  pivotw->add_option("--source", pw_src)->required();
  pivotw->add_option("--target", pw_tgt)->required();
  pivotw->add_option("--alignment", pw_aln)->required();
  pivotw->add_option("--out", pw_out)->required();
  add_common(pivotw, pw_common);
  pivotw->callback([&] {
    BitextCorpus corpus = read_bitext(pw_src, pw_tgt, pw_aln);
    RuleConfig rules =
        rules_with_corpus_vocab(pw_common.options().rules, corpus);
    FormsCache cache(rules);
    PivotCounts counts = collect_counts(corpus);
    FormsIndex index = build_forms_index(source_vocabulary(corpus),
                                         cache.fn());
    auto out = open_out(pw_out);
    dump_word_paraphrases(counts, index, cache.fn(), out);
  });

  // ---- build-lattices ---------------------------------------------------
  auto* blat = app.add_subcommand("build-lattices",
                                  "encode sentences as paraphrase lattices");
  std::string bl_input, bl_src, bl_tgt, bl_aln, bl_out, bl_mode = "full";
  CommonOpts bl_common;
  blat->add_option("--input", bl_input, "sentences to encode")->required();
  blat->add_option("--source", bl_src, "aligned training source")->required();
  blat->add_option("--target", bl_tgt, "aligned training target")->required();
  blat->add_option("--alignment", bl_aln, "training alignment")->required();
  blat->add_option("--out", bl_out)->required();
  blat->add_option("--mode", bl_mode, "full | lemma-only | zero-weights");
  add_common(blat, bl_common);
  blat->callback([&] {
    LatticeMode mode;
    if (bl_mode == "full") mode = LatticeMode::Full;
    else if (bl_mode == "lemma-only") mode = LatticeMode::LemmaOnly;
    else if (bl_mode == "zero-weights") mode = LatticeMode::ZeroWeights;
    else throw UsageError("unknown lattice mode '" + bl_mode + "'");
    BitextCorpus corpus = read_bitext(bl_src, bl_tgt, bl_aln);
    RuleConfig rules =
        rules_with_corpus_vocab(bl_common.options().rules, corpus);
    FormsCache cache(rules);
    PivotCounts counts = collect_counts(corpus);
    FormsIndex index = build_forms_index(source_vocabulary(corpus),
                                         cache.fn());
    ProbFn prob = [&](const std::string& surface,
                      const std::string& word) -> std::optional<double> {
      if (!counts.by_malay.count(word)) return std::nullopt;
      return word_paraphrase_prob(counts, index, surface, word);
    };
    auto out = open_out(bl_out);
    for (const Sentence& s : read_sentences(bl_input))
      out << serialize_lattice(build_lattice(s, cache.fn(), prob, mode))
          << '\n';
  });

  // ---- paraphrase-train -------------------------------------------------
  auto* ptrain = app.add_subcommand(
      "paraphrase-train", "emit the one-word-substituted augmented bitext");
  std::string pt_src, pt_tgt, pt_osrc, pt_otgt, pt_sidecar;
  CommonOpts pt_common;
  ptrain->add_option("--source", pt_src)->required();
  ptrain->add_option("--target", pt_tgt)->required();
  ptrain->add_option("--out-source", pt_osrc)->required();
  ptrain->add_option("--out-target", pt_otgt)->required();
  ptrain->add_option("--sidecar", pt_sidecar, "provenance sidecar file");
  add_common(ptrain, pt_common);
  ptrain->callback([&] {
    BitextCorpus corpus = read_bitext(pt_src, pt_tgt);
    RuleConfig rules =
        rules_with_corpus_vocab(pt_common.options().rules, corpus);
    FormsCache cache(rules);
    SentParResult result = paraphrase_bitext(corpus, cache.fn());
    write_bitext(result.corpus, pt_osrc, pt_otgt);
    if (!pt_sidecar.empty()) {
      auto out = open_out(pt_sidecar);
      write_sentpar_sidecar(result, out);
    }
  });

  // ---- extract-phrases --------------------------------------------------
  auto* extract = app.add_subcommand(
      "extract-phrases", "extract and score a phrase table from aligned text");
  std::string ex_src, ex_tgt, ex_aln, ex_out;
  int ex_maxlen = 7, ex_iters = 10;
  extract->add_option("--source", ex_src)->required();
  extract->add_option("--target", ex_tgt)->required();
  extract->add_option("--alignment", ex_aln)->required();
  extract->add_option("--out", ex_out)->required();
  extract->add_option("--max-len", ex_maxlen, "maximum phrase length");
  extract->add_option("--iterations", ex_iters,
                      "EM iterations for the lexical weights");
  extract->callback([&] {
    BitextCorpus corpus = read_bitext(ex_src, ex_tgt, ex_aln);
    LexTable fwd = train_lex(corpus, ex_iters).table;
    LexTable rev = train_lex(swap_sides(corpus), ex_iters).table;
    std::vector<PhraseOccurrence> occ;
    for (const SentencePair& pair : corpus.pairs) {
      auto one = extract_phrases(pair, ex_maxlen);
      occ.insert(occ.end(), one.begin(), one.end());
    }
    PhraseTable table = score_table(occ, fwd, rev);
    auto out = open_out(ex_out);
    write_table(table, out);
  });

  // ---- merge-tables -----------------------------------------------------
  auto* merge = app.add_subcommand(
      "merge-tables", "merge T and T' with 0.5/1 indicator features");
  std::string mg_t, mg_tp, mg_out;
  int mg_ind = 3;
  merge->add_option("--table-t", mg_t, "table from the original bitext")
      ->required();
  merge->add_option("--table-tprime", mg_tp, "table from the augmented bitext")
      ->required();
  merge->add_option("--out", mg_out)->required();
  merge->add_option("--indicators", mg_ind, "number of indicators (1-3)");
  merge->callback([&] {
    std::ifstream t_in(mg_t), tp_in(mg_tp);
    if (!t_in) throw IoError("cannot open file: " + mg_t);
    if (!tp_in) throw IoError("cannot open file: " + mg_tp);
    PhraseTable merged =
        merge_tables(read_table(t_in), read_table(tp_in), mg_ind);
    auto out = open_out(mg_out);
    write_table(merged, out);
  });

  // ---- pivot-phrases ----------------------------------------------------
  auto* pivotp = app.add_subcommand(
      "pivot-phrases", "append the phrase-level pivot feature to a merged table");
  std::string pp_table, pp_src, pp_tgt, pp_aln, pp_out;
  double pp_floor = 0.5;
  int pp_maxlen = 7;
  CommonOpts pp_common;
  pivotp->add_option("--merged", pp_table, "merged table file")->required();
  pivotp->add_option("--source", pp_src, "original aligned source")->required();
  pivotp->add_option("--target", pp_tgt, "original aligned target")->required();
  pivotp->add_option("--alignment", pp_aln)->required();
  pivotp->add_option("--out", pp_out)->required();
  pivotp->add_option("--floor", pp_floor,
                     "value for T'-only phrases no T phrase reduces to");
  pivotp->add_option("--max-len", pp_maxlen, "maximum phrase length");
  add_common(pivotp, pp_common);
  pivotp->callback([&] {
    std::ifstream t_in(pp_table);
    if (!t_in) throw IoError("cannot open file: " + pp_table);
    PhraseTable merged = read_table(t_in);
    BitextCorpus corpus = read_bitext(pp_src, pp_tgt, pp_aln);
    RuleConfig rules =
        rules_with_corpus_vocab(pp_common.options().rules, corpus);
    FormsCache cache(rules);
    std::vector<PhraseOccurrence> occ;
    for (const SentencePair& pair : corpus.pairs) {
      auto one = extract_phrases(pair, pp_maxlen);
      occ.insert(occ.end(), one.begin(), one.end());
    }
    PhrasePivotCounts counts = collect_phrase_counts(occ);
    std::set<std::string> t_sources;
    for (const auto& [key, entry] : merged.entries)
      if (entry.origin != Origin::TPrimeOnly) t_sources.insert(key.first);
    PhraseFormsIndex index = build_phrase_forms_index(t_sources, cache.fn());
    PhraseTable annotated =
        annotate_pivot_feature(merged, counts, index, pp_floor);
    auto out = open_out(pp_out);
    write_table(annotated, out);
  });

  // ---- decode -----------------------------------------------------------
  auto* decode_cmd = app.add_subcommand(
      "decode", "monotone lattice decoding against a phrase table");
  std::string dc_lat, dc_table, dc_out, dc_weights, dc_oov = "copy";
  bool dc_scores = false;
  decode_cmd->add_option("--lattices", dc_lat, "lattice file, one per line")
      ->required();
  decode_cmd->add_option("--table", dc_table)->required();
  decode_cmd->add_option("--out", dc_out)->required();
  decode_cmd->add_option("--weights", dc_weights,
                         "comma-separated feature weights");
  decode_cmd->add_option("--oov", dc_oov, "copy | fail");
  decode_cmd->add_flag("--scores", dc_scores, "append a score column");
  decode_cmd->callback([&] {
    OovPolicy policy;
    if (dc_oov == "copy") policy = OovPolicy::CopyThrough;
    else if (dc_oov == "fail") policy = OovPolicy::Fail;
    else throw UsageError("unknown OOV policy '" + dc_oov + "'");
    std::ifstream t_in(dc_table);
    if (!t_in) throw IoError("cannot open file: " + dc_table);
    PhraseTable table = read_table(t_in);
    std::vector<double> weights =
        dc_weights.empty()
            ? std::vector<double>(table.feature_count() + 2, 1.0)
            : parse_weights(dc_weights);
    auto out = open_out(dc_out);
    for (const std::string& line : detail::read_lines(dc_lat)) {
      if (line.empty()) throw DataError("empty lattice line");
      DecodeResult res =
          decode(parse_lattice(line), table, weights, policy);
      out << detail::join(res.tokens);
      if (dc_scores) out << '\t' << res.score;
      out << '\n';
    }
  });

  // ---- pipeline ---------------------------------------------------------
  auto* pipe = app.add_subcommand("pipeline",
                                  "run a whole system preset end to end");
  std::string pl_preset = "full", pl_src, pl_tgt, pl_test, pl_outdir;
  std::string pl_weights;
  int pl_ind = -1, pl_iters = -1;
  CommonOpts pl_common;
  pipe->add_option("--preset", pl_preset,
                   "baseline | lemmatize-all | orig+lemma | lattice+sent-par | "
                   "lattice+sent-par+word-par | full");
  pipe->add_option("--source", pl_src, "training source")->required();
  pipe->add_option("--target", pl_tgt, "training target")->required();
  pipe->add_option("--test", pl_test, "test source sentences")->required();
  pipe->add_option("--outdir", pl_outdir)->required();
  pipe->add_option("--indicators", pl_ind, "number of indicators (1-3)");
  pipe->add_option("--iterations", pl_iters, "EM iterations");
  pipe->add_option("--weights", pl_weights, "comma-separated decoder weights");
  add_common(pipe, pl_common);
  pipe->callback([&] {
    PipelineOptions opts = pl_common.options();
    opts.preset = parse_preset(pl_preset);
    if (pl_ind > 0) opts.num_indicators = pl_ind;
    if (pl_iters > 0) opts.em_iterations = pl_iters;
    if (!pl_weights.empty()) opts.weights = parse_weights(pl_weights);

    BitextCorpus train = read_bitext(pl_src, pl_tgt);
    std::vector<Sentence> test = read_sentences(pl_test);
    PipelineResult result = run_pipeline(train, test, opts);

    fs::create_directories(pl_outdir);
    auto path = [&](const std::string& name) {
      return (fs::path(pl_outdir) / name).string();
    };
    {
      auto out = open_out(path("train.align"));
      for (const SentencePair& pair : result.aligned_train.pairs)
        out << format_alignment(*pair.alignment) << '\n';
    }
    {
      auto out = open_out(path("table-t.txt"));
      write_table(result.table_t, out);
    }
    {
      auto out = open_out(path("table.txt"));
      write_table(result.table, out);
    }
    if (!result.sentpar.corpus.pairs.empty()) {
      write_bitext(result.sentpar.corpus, path("paraphrased.src"),
                   path("paraphrased.tgt"));
      auto out = open_out(path("paraphrased.sidecar"));
      write_sentpar_sidecar(result.sentpar, out);
    }
    {
      auto out = open_out(path("lattices.txt"));
      for (const Lattice& lat : result.lattices)
        out << serialize_lattice(lat) << '\n';
    }
    {
      auto out = open_out(path("output.txt"));
      for (const DecodeResult& res : result.outputs)
        out << detail::join(res.tokens) << '\n';
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ContractError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
