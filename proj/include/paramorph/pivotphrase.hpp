#pragma once

// Phrase-level pivoting: the extra table feature that is 1 for entries from
// the original bitext and max over p of Pr(p'|p) for paraphrase-only entries,
// estimated from the original bitext's extracted phrase-pair list.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "paramorph/error.hpp"
#include "paramorph/phrasetable.hpp"
#include "paramorph/pivotword.hpp"

namespace paramorph {

struct PhrasePivotCounts {
  // cooc[p][e] = extraction count of (Malay phrase p, English phrase e).
  std::map<std::string, std::map<std::string, long>> cooc;
  std::map<std::string, long> by_malay;
  std::map<std::string, long> by_english;
};

inline PhrasePivotCounts collect_phrase_counts(
    const std::vector<PhraseOccurrence>& occurrences) {
  PhrasePivotCounts counts;
  for (const PhraseOccurrence& occ : occurrences) {
    std::string p = detail::join(occ.src), e = detail::join(occ.tgt);
    ++counts.cooc[p][e];
    ++counts.by_malay[p];
    ++counts.by_english[e];
  }
  return counts;
}

// All phrases obtained by substituting a non-empty subset of q's tokens by
// one of their non-original forms; q itself excluded.
inline std::set<std::vector<std::string>> par(
    const std::vector<std::string>& q, const FormsFn& forms_fn) {
  if (q.empty()) throw ContractError("par: empty phrase");

  std::vector<std::vector<std::vector<std::string>>> options(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    options[i].push_back({q[i]});  // keep-as-is option first
    for (const FormVariant& v : forms_fn(q[i]).variants)
      if (!v.is_original()) options[i].push_back(v.tokens);
  }

  std::set<std::vector<std::string>> result;
  std::vector<std::size_t> choice(q.size(), 0);
  while (true) {
    bool any_substituted = false;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (choice[i] != 0) any_substituted = true;
    if (any_substituted) {
      std::vector<std::string> phrase;
      for (std::size_t i = 0; i < q.size(); ++i)
        phrase.insert(phrase.end(), options[i][choice[i]].begin(),
                      options[i][choice[i]].end());
      if (phrase != q) result.insert(std::move(phrase));
    }
    std::size_t i = 0;
    while (i < q.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
    if (i == q.size()) break;
  }
  return result;
}

// reducible_to[p'] = original phrases q (attested in T) with p' in par(q).
struct PhraseFormsIndex {
  std::map<std::string, std::set<std::string>> reducible_to;
};

inline PhraseFormsIndex build_phrase_forms_index(
    const std::set<std::string>& table_src_phrases, const FormsFn& forms_fn) {
  PhraseFormsIndex index;
  for (const std::string& q : table_src_phrases) {
    std::vector<std::string> tokens = detail::split_ws(q);
    for (const std::vector<std::string>& reduced : par(tokens, forms_fn))
      index.reducible_to[detail::join(reduced)].insert(q);
  }
  return index;
}

// Pr(p'|p) = sum over English phrases e of Pr(p'|e) Pr(e|p), with
// Pr(p'|e) = sum over q with p' in par(q) of Pr(q|e), MLE from the list.
inline double phrase_paraphrase_prob(const std::string& pprime,
                                     const std::string& p,
                                     const PhrasePivotCounts& counts,
                                     const PhraseFormsIndex& index) {
  auto pit = counts.cooc.find(p);
  if (pit == counts.cooc.end())
    throw ContractError("phrase_paraphrase_prob: unattested phrase '" + p +
                        "'");
  auto rit = index.reducible_to.find(pprime);
  double total = static_cast<double>(counts.by_malay.at(p));
  double prob = 0.0;
  for (const auto& [e, n_pe] : pit->second) {
    double p_e_given_p = n_pe / total;
    double p_pprime_given_e = 0.0;
    if (rit != index.reducible_to.end()) {
      long num = 0;
      for (const std::string& q : rit->second) {
        auto qit = counts.cooc.find(q);
        if (qit == counts.cooc.end()) continue;
        auto eit = qit->second.find(e);
        if (eit != qit->second.end()) num += eit->second;
      }
      p_pprime_given_e =
          static_cast<double>(num) / counts.by_english.at(e);
    }
    prob += p_pprime_given_e * p_e_given_p;
  }
  return prob;
}

// Appends the pivot feature: 1 for entries from the original bitext, the max
// over reducing phrases for T'-only entries, the floor when no T phrase
// reduces to the entry's source.
inline PhraseTable annotate_pivot_feature(const PhraseTable& merged,
                                          const PhrasePivotCounts& counts,
                                          const PhraseFormsIndex& index,
                                          double floor = 0.5) {
  if (!merged.merged)
    throw ContractError("annotate_pivot_feature: table has no origin marks");
  PhraseTable out = merged;
  out.has_pivot = true;
  for (auto& [key, entry] : out.entries) {
    if (entry.origin != Origin::TPrimeOnly) {
      entry.pivot = 1.0;
      continue;
    }
    double best = 0.0;
    auto rit = index.reducible_to.find(key.first);
    if (rit != index.reducible_to.end())
      for (const std::string& p : rit->second)
        if (counts.cooc.count(p))
          best = std::max(best,
                          phrase_paraphrase_prob(key.first, p, counts, index));
    entry.pivot = best > 0.0 ? best : floor;
  }
  return out;
}

}  // namespace paramorph
