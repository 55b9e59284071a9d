#pragma once

// Desk-scale word alignment: a Model-1-style EM lexical translation model
// with a NULL source token, directional Viterbi alignment, and the
// intersect+grow symmetrization heuristic.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "paramorph/corpus.hpp"
#include "paramorph/error.hpp"

namespace paramorph {

struct LexTable {
  // t[f][e] = Pr(e|f), f a source word or kNull.
  std::map<std::string, std::map<std::string, double>> t;

  static constexpr const char* kNull = "<NULL>";

  double prob(const std::string& f, const std::string& e) const {
    auto fit = t.find(f);
    if (fit == t.end()) return 0.0;
    auto eit = fit->second.find(e);
    return eit == fit->second.end() ? 0.0 : eit->second;
  }
};

struct TrainResult {
  LexTable table;
  // Model-1 data log-likelihood under the parameters at the start of each
  // iteration; non-decreasing by EM.
  std::vector<double> log_likelihood;
};

inline TrainResult train_lex(const BitextCorpus& corpus, int iterations) {
  if (iterations < 1) throw ContractError("train_lex: iterations must be >= 1");
  if (corpus.pairs.empty()) throw ContractError("train_lex: empty corpus");

  std::set<std::string> tgt_vocab;
  for (const SentencePair& pair : corpus.pairs)
    tgt_vocab.insert(pair.target.tokens.begin(), pair.target.tokens.end());

  TrainResult result;
  LexTable& lex = result.table;

  // Uniform initialization over co-occurring target words.
  double uniform = 1.0 / static_cast<double>(tgt_vocab.size());
  for (const SentencePair& pair : corpus.pairs) {
    for (const std::string& e : pair.target.tokens) {
      lex.t[LexTable::kNull][e] = uniform;
      for (const std::string& f : pair.source.tokens) lex.t[f][e] = uniform;
    }
  }

  for (int iter = 0; iter < iterations; ++iter) {
    std::map<std::string, std::map<std::string, double>> count;
    std::map<std::string, double> total;
    double ll = 0.0;
    for (const SentencePair& pair : corpus.pairs) {
      double len_norm =
          1.0 / static_cast<double>(pair.source.tokens.size() + 1);
      for (const std::string& e : pair.target.tokens) {
        double denom = lex.prob(LexTable::kNull, e);
        for (const std::string& f : pair.source.tokens)
          denom += lex.prob(f, e);
        ll += std::log(denom * len_norm);
        auto accumulate = [&](const std::string& f) {
          double share = lex.prob(f, e) / denom;
          count[f][e] += share;
          total[f] += share;
        };
        accumulate(LexTable::kNull);
        for (const std::string& f : pair.source.tokens) accumulate(f);
      }
    }
    result.log_likelihood.push_back(ll);
    for (auto& [f, row] : count)
      for (auto& [e, c] : row) lex.t[f][e] = c / total[f];
  }
  return result;
}

enum class AlignDirection { Forward, Reverse };

// Links each target word to its most likely source word (NULL yields no
// link).  Forward: table is source->target; Reverse: table is trained on the
// swapped corpus, roles exchange, links still reported as (source, target).
inline Alignment viterbi_align(const LexTable& table, const SentencePair& pair,
                               AlignDirection direction) {
  const auto& predicted = direction == AlignDirection::Forward
                              ? pair.target.tokens
                              : pair.source.tokens;
  const auto& context = direction == AlignDirection::Forward
                            ? pair.source.tokens
                            : pair.target.tokens;
  Alignment links;
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    double best = table.prob(LexTable::kNull, predicted[j]);
    int best_i = -1;  // NULL
    for (std::size_t i = 0; i < context.size(); ++i) {
      double p = table.prob(context[i], predicted[j]);
      if (p > best) {
        best = p;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i < 0) continue;
    if (direction == AlignDirection::Forward)
      links.emplace(best_i, static_cast<int>(j));
    else
      links.emplace(static_cast<int>(j), best_i);
  }
  return links;
}

struct SymmetrizeOptions {
  bool diagonal = false;  // grow over the 8-neighborhood instead of 4
};

// Intersection, then repeatedly adopt union links adjacent to the current
// set whose source or target word is not yet aligned.
inline Alignment symmetrize(const Alignment& fwd, const Alignment& rev,
                            const SymmetrizeOptions& opts = {}) {
  Alignment result;
  std::set_intersection(fwd.begin(), fwd.end(), rev.begin(), rev.end(),
                        std::inserter(result, result.begin()));
  Alignment uni;
  std::set_union(fwd.begin(), fwd.end(), rev.begin(), rev.end(),
                 std::inserter(uni, uni.begin()));

  std::set<int> src_done, tgt_done;
  for (const auto& [i, j] : result) {
    src_done.insert(i);
    tgt_done.insert(j);
  }
  auto adjacent = [&](int i, int j) {
    static const int n4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static const int n8[8][2] = {{-1, 0}, {1, 0},  {0, -1}, {0, 1},
                                 {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    const auto* nb = opts.diagonal ? n8 : n4;
    int count = opts.diagonal ? 8 : 4;
    for (int k = 0; k < count; ++k)
      if (result.count({i + nb[k][0], j + nb[k][1]})) return true;
    return false;
  };

  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [i, j] : uni) {
      if (result.count({i, j})) continue;
      if (src_done.count(i) && tgt_done.count(j)) continue;
      if (!adjacent(i, j)) continue;
      result.emplace(i, j);
      src_done.insert(i);
      tgt_done.insert(j);
      grew = true;
    }
  }
  return result;
}

// Full alignment pass over a corpus: EM in both directions, per-pair Viterbi,
// intersect+grow.  Returns a copy of the corpus with alignments attached.
inline BitextCorpus align_corpus(const BitextCorpus& corpus, int iterations,
                                 const SymmetrizeOptions& opts = {}) {
  LexTable fwd = train_lex(corpus, iterations).table;
  LexTable rev = train_lex(swap_sides(corpus), iterations).table;
  BitextCorpus out = corpus;
  for (SentencePair& pair : out.pairs) {
    Alignment f = viterbi_align(fwd, pair, AlignDirection::Forward);
    Alignment r = viterbi_align(rev, pair, AlignDirection::Reverse);
    pair.alignment = symmetrize(f, r, opts);
  }
  return out;
}

}  // namespace paramorph
