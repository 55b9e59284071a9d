#pragma once

// Word-level paraphrase probabilities by pivoting over the English side of a
// word-aligned bitext.  A generated form is treated as a pseudoword standing
// for the union of all surface words reducible to it.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "paramorph/corpus.hpp"
#include "paramorph/error.hpp"
#include "paramorph/morphology.hpp"

namespace paramorph {

struct PivotCounts {
  // cooc[w][e] = number of alignment links between Malay w and English e.
  std::map<std::string, std::map<std::string, long>> cooc;
  std::map<std::string, long> by_malay;    // sum over e of cooc[w][e]
  std::map<std::string, long> by_english;  // sum over w of cooc[w][e]
};

inline PivotCounts collect_counts(const BitextCorpus& corpus) {
  PivotCounts counts;
  for (const SentencePair& pair : corpus.pairs) {
    if (!pair.alignment)
      throw ContractError("collect_counts requires an aligned corpus");
    for (const auto& [i, j] : *pair.alignment) {
      const std::string& w = pair.source.tokens[i];
      const std::string& e = pair.target.tokens[j];
      ++counts.cooc[w][e];
      ++counts.by_malay[w];
      ++counts.by_english[e];
    }
  }
  return counts;
}

// Pr(e|w) over English words aligned to w; empty when w is unseen.
inline std::map<std::string, double> p_e_given_w(const PivotCounts& counts,
                                                 const std::string& w) {
  std::map<std::string, double> dist;
  auto wit = counts.cooc.find(w);
  if (wit == counts.cooc.end()) return dist;
  double total = static_cast<double>(counts.by_malay.at(w));
  for (const auto& [e, n] : wit->second) dist[e] = n / total;
  return dist;
}

// Maps each form surface (tokens space-joined) to the surface words whose
// forms() contain it.  Built over the training-side vocabulary.
struct FormsIndex {
  std::map<std::string, std::set<std::string>> reducible_to;

  const std::set<std::string>* producers(const std::string& surface) const {
    auto it = reducible_to.find(surface);
    return it == reducible_to.end() ? nullptr : &it->second;
  }
};

inline FormsIndex build_forms_index(const std::set<std::string>& vocab,
                                    const FormsFn& forms_fn) {
  FormsIndex index;
  for (const std::string& v : vocab)
    for (const FormVariant& f : forms_fn(v).variants)
      index.reducible_to[f.surface()].insert(v);
  return index;
}

inline std::set<std::string> source_vocabulary(const BitextCorpus& corpus) {
  std::set<std::string> vocab;
  for (const SentencePair& pair : corpus.pairs)
    vocab.insert(pair.source.tokens.begin(), pair.source.tokens.end());
  return vocab;
}

// Pr(w'|e) = sum over v reducible to w' of #(v,e) / sum_u #(u,e).
inline double p_form_given_e(const PivotCounts& counts, const FormsIndex& index,
                             const std::string& wprime, const std::string& e) {
  auto eit = counts.by_english.find(e);
  if (eit == counts.by_english.end() || eit->second <= 0)
    throw ContractError("p_form_given_e: unseen english word '" + e + "'");
  const auto* producers = index.producers(wprime);
  if (!producers) return 0.0;
  long num = 0;
  for (const std::string& v : *producers) {
    auto vit = counts.cooc.find(v);
    if (vit == counts.cooc.end()) continue;
    auto it = vit->second.find(e);
    if (it != vit->second.end()) num += it->second;
  }
  return static_cast<double>(num) / static_cast<double>(eit->second);
}

// Pr(w'|w) = sum over e of Pr(w'|e) Pr(e|w); zero when w is unseen.
inline double word_paraphrase_prob(const PivotCounts& counts,
                                   const FormsIndex& index,
                                   const std::string& wprime,
                                   const std::string& w) {
  double prob = 0.0;
  for (const auto& [e, p_e] : p_e_given_w(counts, w))
    prob += p_form_given_e(counts, index, wprime, e) * p_e;
  return prob;
}

// Tab-separated "w\tw'\tprob" dump, sorted by w then descending probability,
// non-original forms only, 12 significant digits.
inline void dump_word_paraphrases(const PivotCounts& counts,
                                  const FormsIndex& index,
                                  const FormsFn& forms_fn, std::ostream& out) {
  for (const auto& [w, total] : counts.by_malay) {
    std::vector<std::pair<double, std::string>> rows;
    for (const FormVariant& v : forms_fn(w).variants) {
      if (v.is_original()) continue;
      double p = word_paraphrase_prob(counts, index, v.surface(), w);
      if (p > 0.0) rows.emplace_back(p, v.surface());
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (const auto& [p, surface] : rows) {
      std::ostringstream num;
      num.precision(12);
      num << p;
      out << w << '\t' << surface << '\t' << num.str() << '\n';
    }
  }
}

}  // namespace paramorph
