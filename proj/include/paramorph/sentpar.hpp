#pragma once

// Sentence-level paraphrasing of the training bitext: each emitted variant
// substitutes exactly one source word by one of its simpler forms and keeps
// the original target sentence.

#include <set>
#include <string>
#include <vector>

#include "paramorph/corpus.hpp"
#include "paramorph/pivotword.hpp"

namespace paramorph {

struct SentParRecord {
  int orig_line;        // zero-based index into the input corpus
  int position;         // substituted source position, -1 for original pairs
  std::string variant;  // substituted surface, "-" for original pairs
};

struct SentParResult {
  BitextCorpus corpus;                 // originals first, then variants
  std::vector<SentParRecord> records;  // one per emitted pair, same order
};

inline SentParResult paraphrase_bitext(const BitextCorpus& corpus,
                                       const FormsFn& forms_fn) {
  if (corpus.pairs.empty())
    throw ContractError("paraphrase_bitext: empty corpus");

  SentParResult out;
  for (std::size_t n = 0; n < corpus.pairs.size(); ++n) {
    SentencePair orig;
    orig.source = corpus.pairs[n].source;
    orig.target = corpus.pairs[n].target;
    out.corpus.pairs.push_back(std::move(orig));
    out.records.push_back({static_cast<int>(n), -1, "-"});
  }

  for (std::size_t n = 0; n < corpus.pairs.size(); ++n) {
    const SentencePair& pair = corpus.pairs[n];
    std::set<std::string> seen{pair.source.str()};
    for (std::size_t i = 0; i < pair.source.tokens.size(); ++i) {
      // Variant order is deterministic: the paraphrase set is surface-sorted.
      for (const FormVariant& v : forms_fn(pair.source.tokens[i]).variants) {
        if (v.is_original()) continue;
        SentencePair sub;
        sub.source.tokens.insert(sub.source.tokens.end(),
                                 pair.source.tokens.begin(),
                                 pair.source.tokens.begin() + i);
        sub.source.tokens.insert(sub.source.tokens.end(), v.tokens.begin(),
                                 v.tokens.end());
        sub.source.tokens.insert(sub.source.tokens.end(),
                                 pair.source.tokens.begin() + i + 1,
                                 pair.source.tokens.end());
        if (!seen.insert(sub.source.str()).second) continue;
        sub.target = pair.target;
        out.corpus.pairs.push_back(std::move(sub));
        out.records.push_back(
            {static_cast<int>(n), static_cast<int>(i), v.surface()});
      }
    }
  }
  return out;
}

inline void write_sentpar_sidecar(const SentParResult& result,
                                  std::ostream& out) {
  for (const SentParRecord& r : result.records)
    out << r.orig_line << '\t' << r.position << '\t' << r.variant << '\n';
}

}  // namespace paramorph
