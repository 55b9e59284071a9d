#pragma once

// End-to-end orchestration of the pipeline and the system presets: plain
// baseline, lemmatize-all, the lattice systems with sentence-level
// paraphrasing, word-level pivot weights, and the phrase-level pivot feature.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "paramorph/aligner.hpp"
#include "paramorph/corpus.hpp"
#include "paramorph/decoder.hpp"
#include "paramorph/lattice.hpp"
#include "paramorph/morphology.hpp"
#include "paramorph/phrasetable.hpp"
#include "paramorph/pivotphrase.hpp"
#include "paramorph/pivotword.hpp"
#include "paramorph/sentpar.hpp"

namespace paramorph {

enum class Preset {
  Baseline,      // no morphology anywhere
  LemmatizeAll,  // lemmatized source side everywhere
  OrigLemma,     // lattice + sent-par, lemma-only unweighted alternatives
  SentPar,       // lattice + sent-par, all forms, unweighted
  WordPar,       // + pivot probabilities as lattice weights
  Full,          // + phrase-level pivot feature
};

inline Preset parse_preset(const std::string& name) {
  if (name == "baseline") return Preset::Baseline;
  if (name == "lemmatize-all") return Preset::LemmatizeAll;
  if (name == "orig+lemma" || name == "lattice+sent-par(orig+lemma)")
    return Preset::OrigLemma;
  if (name == "lattice+sent-par" || name == "sent-par") return Preset::SentPar;
  if (name == "lattice+sent-par+word-par" || name == "word-par")
    return Preset::WordPar;
  if (name == "full" || name == "lattice+sent-par+word-par+phrase-par")
    return Preset::Full;
  throw UsageError("unknown preset '" + name + "'");
}

struct PipelineOptions {
  Preset preset = Preset::Full;
  RuleConfig rules = RuleConfig::standard();
  int em_iterations = 10;
  int num_indicators = 3;
  int max_phrase_len = 7;
  double pivot_floor = 0.5;
  std::vector<double> weights;  // empty = all ones
  OovPolicy oov = OovPolicy::CopyThrough;
};

// Memoizing forms function over a fixed rule config.
class FormsCache {
 public:
  explicit FormsCache(RuleConfig cfg) : cfg_(std::move(cfg)) {}

  const ParaphraseSet& operator()(const std::string& word) const {
    auto it = cache_.find(word);
    if (it == cache_.end())
      it = cache_.emplace(word, generate_forms(word, cfg_)).first;
    return it->second;
  }

  FormsFn fn() const {
    return [this](const std::string& w) { return (*this)(w); };
  }

  const RuleConfig& config() const { return cfg_; }

 private:
  RuleConfig cfg_;
  mutable std::map<std::string, ParaphraseSet> cache_;
};

struct PipelineResult {
  BitextCorpus aligned_train;        // original pairs with alignments
  SentParResult sentpar;             // empty for non-morphological presets
  PhraseTable table_t;               // table from the original bitext
  PhraseTable table;                 // final table handed to the decoder
  std::vector<Lattice> lattices;     // one per test sentence
  std::vector<DecodeResult> outputs; // one per test sentence
};

namespace detail {

inline FormsFn no_forms() {
  return [](const std::string& w) {
    ParaphraseSet set;
    set.original = w;
    set.variants.push_back(FormVariant{{w}, {Rule::Original}});
    return set;
  };
}

inline std::vector<PhraseOccurrence> extract_corpus(const BitextCorpus& corpus,
                                                    int max_len) {
  std::vector<PhraseOccurrence> occ;
  for (const SentencePair& pair : corpus.pairs) {
    auto one = extract_phrases(pair, max_len);
    occ.insert(occ.end(), std::make_move_iterator(one.begin()),
               std::make_move_iterator(one.end()));
  }
  return occ;
}

inline BitextCorpus align_with(const LexTable& fwd, const LexTable& rev,
                               const BitextCorpus& corpus) {
  BitextCorpus out = corpus;
  for (SentencePair& pair : out.pairs) {
    Alignment f = viterbi_align(fwd, pair, AlignDirection::Forward);
    Alignment r = viterbi_align(rev, pair, AlignDirection::Reverse);
    pair.alignment = symmetrize(f, r);
  }
  return out;
}

}  // namespace detail

inline PipelineResult run_pipeline(const BitextCorpus& train_in,
                                   const std::vector<Sentence>& test,
                                   const PipelineOptions& opts) {
  if (train_in.pairs.empty())
    throw ContractError("run_pipeline: empty training corpus");

  RuleConfig rules = opts.rules;
  if (rules.vocab.empty()) {
    // Default attestation vocabulary: the training-side surface words.
    for (const std::string& w : source_vocabulary(train_in))
      rules.vocab.insert(w);
  }
  auto forms_cache = std::make_shared<FormsCache>(rules);
  bool morphological = opts.preset != Preset::Baseline &&
                       opts.preset != Preset::LemmatizeAll;

  // lemmatize-all rewrites the Malay side of everything up front.
  BitextCorpus train = train_in;
  std::vector<Sentence> test_src = test;
  if (opts.preset == Preset::LemmatizeAll) {
    std::map<std::string, std::string> lemmas;
    auto lemma_of = [&](const std::string& w) {
      auto it = lemmas.find(w);
      if (it == lemmas.end()) it = lemmas.emplace(w, lemma(w, rules)).first;
      return it->second;
    };
    for (SentencePair& pair : train.pairs)
      for (std::string& tok : pair.source.tokens) tok = lemma_of(tok);
    for (Sentence& s : test_src)
      for (std::string& tok : s.tokens) tok = lemma_of(tok);
  }

  PipelineResult result;

  // Alignment and the original-bitext table T.
  LexTable lex_fwd = train_lex(train, opts.em_iterations).table;
  LexTable lex_rev = train_lex(swap_sides(train), opts.em_iterations).table;
  result.aligned_train = detail::align_with(lex_fwd, lex_rev, train);
  std::vector<PhraseOccurrence> occ_t =
      detail::extract_corpus(result.aligned_train, opts.max_phrase_len);
  result.table_t = score_table(occ_t, lex_fwd, lex_rev);

  if (morphological) {
    // Augmented bitext, its own alignment pass, T', and the merge.
    result.sentpar = paraphrase_bitext(train, forms_cache->fn());
    LexTable aug_fwd =
        train_lex(result.sentpar.corpus, opts.em_iterations).table;
    LexTable aug_rev =
        train_lex(swap_sides(result.sentpar.corpus), opts.em_iterations).table;
    BitextCorpus aligned_aug =
        detail::align_with(aug_fwd, aug_rev, result.sentpar.corpus);
    std::vector<PhraseOccurrence> occ_aug =
        detail::extract_corpus(aligned_aug, opts.max_phrase_len);
    PhraseTable table_tprime = score_table(occ_aug, aug_fwd, aug_rev);
    result.table =
        merge_tables(result.table_t, table_tprime, opts.num_indicators);
    if (opts.preset == Preset::Full) {
      PhrasePivotCounts pcounts = collect_phrase_counts(occ_t);
      std::set<std::string> t_sources;
      for (const auto& [key, entry] : result.table_t.entries)
        t_sources.insert(key.first);
      PhraseFormsIndex pindex =
          build_phrase_forms_index(t_sources, forms_cache->fn());
      result.table = annotate_pivot_feature(result.table, pcounts, pindex,
                                            opts.pivot_floor);
    }
  } else {
    result.table = result.table_t;
  }

  // Lattices for the test side.
  LatticeMode mode = LatticeMode::Full;
  switch (opts.preset) {
    case Preset::OrigLemma: mode = LatticeMode::LemmaOnly; break;
    case Preset::SentPar: mode = LatticeMode::ZeroWeights; break;
    default: break;
  }
  FormsFn lattice_forms =
      morphological ? forms_cache->fn() : detail::no_forms();

  PivotCounts wcounts;
  FormsIndex windex;
  if (opts.preset == Preset::WordPar || opts.preset == Preset::Full) {
    wcounts = collect_counts(result.aligned_train);
    windex =
        build_forms_index(source_vocabulary(train), forms_cache->fn());
  }
  ProbFn prob_fn = [&](const std::string& surface,
                       const std::string& word) -> std::optional<double> {
    if (!wcounts.by_malay.count(word)) return std::nullopt;
    return word_paraphrase_prob(wcounts, windex, surface, word);
  };

  std::vector<double> weights = opts.weights;
  if (weights.empty())
    weights.assign(result.table.feature_count() + 2, 1.0);

  for (const Sentence& s : test_src) {
    Lattice lat = build_lattice(s, lattice_forms, prob_fn, mode);
    result.outputs.push_back(
        decode(lat, result.table, weights, opts.oov, opts.max_phrase_len));
    result.lattices.push_back(std::move(lat));
  }
  return result;
}

}  // namespace paramorph
