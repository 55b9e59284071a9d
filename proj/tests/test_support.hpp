#pragma once

// Shared helpers for the unit and acceptance suites: tiny corpus builders,
// deterministic random generators, toy forms functions, and the independent
// brute-force oracles the pivot implementations are checked against.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "paramorph/corpus.hpp"
#include "paramorph/morphology.hpp"
#include "paramorph/phrasetable.hpp"
#include "paramorph/pivotword.hpp"

namespace test_support {

using namespace paramorph;

inline Sentence sent(const std::string& text) {
  Sentence s{detail::split_ws(text)};
  return s;
}

inline SentencePair make_pair(const std::string& src, const std::string& tgt,
                              const Alignment& links) {
  SentencePair p;
  p.source = sent(src);
  p.target = sent(tgt);
  p.alignment = links;
  return p;
}

inline SentencePair make_pair(const std::string& src, const std::string& tgt) {
  SentencePair p;
  p.source = sent(src);
  p.target = sent(tgt);
  return p;
}

// A forms function defined by an explicit table of non-original variants.
inline FormsFn table_forms(
    std::map<std::string, std::vector<std::vector<std::string>>> table) {
  return [table = std::move(table)](const std::string& word) {
    ParaphraseSet set;
    set.original = word;
    std::map<std::string, FormVariant> variants;
    variants.emplace(word, FormVariant{{word}, {Rule::Original}});
    auto it = table.find(word);
    if (it != table.end())
      for (const auto& tokens : it->second) {
        FormVariant v{tokens, {Rule::Affix}};
        variants.emplace(v.surface(), v);
      }
    for (auto& [surface, v] : variants) set.variants.push_back(v);
    return set;
  };
}

// Deterministic synthetic morphology for random corpora: dash words reduce
// to their left side, words longer than three characters also drop their
// final character.
inline ParaphraseSet synth_forms(const std::string& word) {
  std::map<std::string, std::vector<std::vector<std::string>>> table;
  std::vector<std::vector<std::string>> variants;
  auto dash = word.find('-');
  if (dash != std::string::npos && dash > 0 && dash + 1 < word.size())
    variants.push_back({word.substr(0, dash)});
  if (word.size() > 3 && dash == std::string::npos)
    variants.push_back({word.substr(0, word.size() - 1)});
  table[word] = variants;
  return table_forms(std::move(table))(word);
}

// Random aligned corpus: up to max_pairs pairs of <= 6-word sentences over a
// small vocabulary, alignments sampled link by link.
inline BitextCorpus random_corpus(std::mt19937& rng, int max_pairs = 20) {
  static const std::vector<std::string> src_vocab = {
      "abc",  "abcd", "ab-ab", "defg", "de-de", "xy", "pqrs", "lmno"};
  static const std::vector<std::string> tgt_vocab = {"P", "Q", "R", "S",
                                                     "T", "U"};
  std::uniform_int_distribution<int> n_pairs(1, max_pairs);
  std::uniform_int_distribution<int> n_words(1, 6);
  BitextCorpus corpus;
  int pairs = n_pairs(rng);
  for (int n = 0; n < pairs; ++n) {
    SentencePair pair;
    int slen = n_words(rng), tlen = n_words(rng);
    std::uniform_int_distribution<std::size_t> s_pick(0, src_vocab.size() - 1);
    std::uniform_int_distribution<std::size_t> t_pick(0, tgt_vocab.size() - 1);
    for (int i = 0; i < slen; ++i)
      pair.source.tokens.push_back(src_vocab[s_pick(rng)]);
    for (int j = 0; j < tlen; ++j)
      pair.target.tokens.push_back(tgt_vocab[t_pick(rng)]);
    Alignment links;
    std::uniform_int_distribution<int> s_idx(0, slen - 1), t_idx(0, tlen - 1);
    std::uniform_int_distribution<int> n_links(0, slen + tlen);
    for (int k = n_links(rng); k > 0; --k)
      links.emplace(s_idx(rng), t_idx(rng));
    pair.alignment = std::move(links);
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

// Brute-force word-level pivot oracle: nested loops over raw alignment
// links, no marginal caching, mirroring the defining sums directly.
inline double oracle_word_paraphrase_prob(
    const BitextCorpus& corpus,
    const std::map<std::string, std::set<std::string>>& reducible_to,
    const std::string& wprime, const std::string& w) {
  auto link_count = [&](const std::string& s, const std::string& e) {
    long n = 0;
    for (const SentencePair& pair : corpus.pairs)
      for (const auto& [i, j] : *pair.alignment)
        if (pair.source.tokens[i] == s && pair.target.tokens[j] == e) ++n;
    return n;
  };
  auto links_from = [&](const std::string& s) {
    long n = 0;
    for (const SentencePair& pair : corpus.pairs)
      for (const auto& [i, j] : *pair.alignment)
        if (pair.source.tokens[i] == s) ++n;
    return n;
  };
  auto links_to = [&](const std::string& e) {
    long n = 0;
    for (const SentencePair& pair : corpus.pairs)
      for (const auto& [i, j] : *pair.alignment)
        if (pair.target.tokens[j] == e) ++n;
    return n;
  };

  long total_w = links_from(w);
  if (total_w == 0) return 0.0;
  std::set<std::string> pivots;
  for (const SentencePair& pair : corpus.pairs)
    for (const auto& [i, j] : *pair.alignment)
      if (pair.source.tokens[i] == w) pivots.insert(pair.target.tokens[j]);

  double prob = 0.0;
  for (const std::string& e : pivots) {
    double p_e_given_w =
        static_cast<double>(link_count(w, e)) / static_cast<double>(total_w);
    double p_wprime_given_e = 0.0;
    auto rit = reducible_to.find(wprime);
    if (rit != reducible_to.end())
      for (const std::string& v : rit->second)
        p_wprime_given_e += static_cast<double>(link_count(v, e)) /
                            static_cast<double>(links_to(e));
    prob += p_wprime_given_e * p_e_given_w;
  }
  return prob;
}

// Brute-force phrase-level pivot: direct triple loop over the phrase-pair
// occurrence list.
inline double oracle_phrase_paraphrase_prob(
    const std::vector<PhraseOccurrence>& occurrences,
    const std::map<std::string, std::set<std::string>>& reducible_to,
    const std::string& pprime, const std::string& p) {
  auto join = [](const std::vector<std::string>& t) {
    return detail::join(t);
  };
  auto pair_count = [&](const std::string& s, const std::string& e) {
    long n = 0;
    for (const PhraseOccurrence& occ : occurrences)
      if (join(occ.src) == s && join(occ.tgt) == e) ++n;
    return n;
  };
  long total_p = 0;
  for (const PhraseOccurrence& occ : occurrences)
    if (join(occ.src) == p) ++total_p;
  if (total_p == 0) return 0.0;

  std::set<std::string> pivots;
  for (const PhraseOccurrence& occ : occurrences)
    if (join(occ.src) == p) pivots.insert(join(occ.tgt));

  double prob = 0.0;
  for (const std::string& e : pivots) {
    long total_e = 0;
    for (const PhraseOccurrence& occ : occurrences)
      if (join(occ.tgt) == e) ++total_e;
    double p_e_given_p =
        static_cast<double>(pair_count(p, e)) / static_cast<double>(total_p);
    double p_pp_given_e = 0.0;
    auto rit = reducible_to.find(pprime);
    if (rit != reducible_to.end())
      for (const std::string& q : rit->second)
        p_pp_given_e += static_cast<double>(pair_count(q, e)) /
                        static_cast<double>(total_e);
    prob += p_pp_given_e * p_e_given_p;
  }
  return prob;
}

// The rule config and attestation vocabulary used across the golden tests.
inline RuleConfig golden_rules() {
  RuleConfig cfg = RuleConfig::standard();
  cfg.vocab = {"adik",   "beradik",  "adik-beradik", "kereta",  "api",
               "ajar",   "ajaran",   "pelajar",      "pelajaran",
               "berpelajaran", "kerja", "sama",      "kerjasama",
               "makan",  "bekalan",  "lain",         "gunung",  "ganang"};
  return cfg;
}

}  // namespace test_support
