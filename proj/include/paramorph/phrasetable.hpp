#pragma once

// Phrase pair extraction from aligned sentence pairs, the five standard
// features, T/T' merging with 0.5/1 indicator features, and the table text
// format "src ||| tgt ||| f1 f2 f3 f4 f5 [indicators] [pivot]".

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paramorph/aligner.hpp"
#include "paramorph/corpus.hpp"
#include "paramorph/error.hpp"

namespace paramorph {

// The arbitrary but fixed phrase penalty: constant 1 in negative-log space.
inline constexpr double kPhrasePenalty = 2.718281828459045;

// Indicator encoding: 1 = condition holds, 0.5 = it does not.
inline constexpr double kIndicatorTrue = 1.0;
inline constexpr double kIndicatorFalse = 0.5;

struct PhraseOccurrence {
  std::vector<std::string> src, tgt;
  Alignment links;  // phrase-relative indices
};

inline std::vector<PhraseOccurrence> extract_phrases(const SentencePair& pair,
                                                     int max_len = 7) {
  if (!pair.alignment)
    throw ContractError("extract_phrases requires an aligned sentence pair");
  const Alignment& links = *pair.alignment;
  int S = static_cast<int>(pair.source.tokens.size());
  int T = static_cast<int>(pair.target.tokens.size());

  std::vector<char> tgt_aligned(T, 0);
  for (const auto& [i, j] : links) tgt_aligned[j] = 1;

  std::vector<PhraseOccurrence> out;
  for (int i1 = 0; i1 < S; ++i1) {
    for (int i2 = i1; i2 < std::min(S, i1 + max_len); ++i2) {
      int j1 = T, j2 = -1;
      for (const auto& [i, j] : links)
        if (i >= i1 && i <= i2) {
          j1 = std::min(j1, j);
          j2 = std::max(j2, j);
        }
      if (j2 < 0) continue;  // needs at least one link inside
      bool consistent = true;
      for (const auto& [i, j] : links)
        if (j >= j1 && j <= j2 && (i < i1 || i > i2)) {
          consistent = false;
          break;
        }
      if (!consistent) continue;
      // extend over unaligned target boundary words
      for (int js = j1; js >= 0 && (js == j1 || !tgt_aligned[js]); --js) {
        for (int je = j2; je < T && (je == j2 || !tgt_aligned[je]); ++je) {
          if (je - js + 1 > max_len) break;
          PhraseOccurrence occ;
          occ.src.assign(pair.source.tokens.begin() + i1,
                         pair.source.tokens.begin() + i2 + 1);
          occ.tgt.assign(pair.target.tokens.begin() + js,
                         pair.target.tokens.begin() + je + 1);
          for (const auto& [i, j] : links)
            if (i >= i1 && i <= i2) occ.links.emplace(i - i1, j - js);
          out.push_back(std::move(occ));
        }
      }
    }
  }
  return out;
}

enum class Origin { TOnly, TPrimeOnly, Both };

inline const char* origin_name(Origin o) {
  switch (o) {
    case Origin::TOnly: return "T";
    case Origin::TPrimeOnly: return "T'";
    case Origin::Both: return "both";
  }
  return "?";
}

struct PhraseEntry {
  // fwd phrase prob, rev phrase prob, fwd lexical, rev lexical, penalty
  std::array<double, 5> core{0, 0, 0, 0, kPhrasePenalty};
  std::vector<double> indicators;
  std::optional<double> pivot;
  Origin origin = Origin::TOnly;

  std::vector<double> features() const {
    std::vector<double> f(core.begin(), core.end());
    f.insert(f.end(), indicators.begin(), indicators.end());
    if (pivot) f.push_back(*pivot);
    return f;
  }
};

using PhraseKey = std::pair<std::string, std::string>;  // space-joined sides

struct PhraseTable {
  std::map<PhraseKey, PhraseEntry> entries;
  int num_indicators = 0;
  bool has_pivot = false;
  bool merged = false;

  int feature_count() const {
    return 5 + num_indicators + (has_pivot ? 1 : 0);
  }
};

namespace detail {

inline std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ' ';
    s += tokens[i];
  }
  return s;
}

inline constexpr double kLexFloor = 1e-9;

// Per-target-word average of t(e|f) over linked source words (NULL when
// unlinked), multiplied across target words.
inline double lexical_weight(const std::vector<std::string>& src,
                             const std::vector<std::string>& tgt,
                             const Alignment& links, const LexTable& lex) {
  double w = 1.0;
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    double sum = 0.0;
    int n = 0;
    for (const auto& [li, lj] : links)
      if (lj == static_cast<int>(j)) {
        sum += lex.prob(src[li], tgt[j]);
        ++n;
      }
    double avg = n ? sum / n : lex.prob(LexTable::kNull, tgt[j]);
    w *= std::max(avg, kLexFloor);
  }
  return std::min(w, 1.0);
}

inline Alignment transpose(const Alignment& a) {
  Alignment t;
  for (const auto& [i, j] : a) t.emplace(j, i);
  return t;
}

}  // namespace detail

// MLE phrase probabilities over extraction counts plus lexical weights.
// lex_fwd maps source->target, lex_rev target->source.
inline PhraseTable score_table(const std::vector<PhraseOccurrence>& occurrences,
                               const LexTable& lex_fwd,
                               const LexTable& lex_rev) {
  if (occurrences.empty())
    throw ContractError("score_table: empty phrase pair multiset");

  std::map<PhraseKey, long> count;
  std::map<std::string, long> src_total, tgt_total;
  std::map<PhraseKey, double> best_lexf, best_lexr;
  for (const PhraseOccurrence& occ : occurrences) {
    PhraseKey key{detail::join(occ.src), detail::join(occ.tgt)};
    ++count[key];
    ++src_total[key.first];
    ++tgt_total[key.second];
    double lf = detail::lexical_weight(occ.src, occ.tgt, occ.links, lex_fwd);
    double lr = detail::lexical_weight(occ.tgt, occ.src,
                                       detail::transpose(occ.links), lex_rev);
    auto [fit, fnew] = best_lexf.emplace(key, lf);
    if (!fnew) fit->second = std::max(fit->second, lf);
    auto [rit, rnew] = best_lexr.emplace(key, lr);
    if (!rnew) rit->second = std::max(rit->second, lr);
  }

  PhraseTable table;
  for (const auto& [key, n] : count) {
    PhraseEntry entry;
    entry.core[0] = static_cast<double>(n) / src_total[key.first];
    entry.core[1] = static_cast<double>(n) / tgt_total[key.second];
    entry.core[2] = best_lexf[key];
    entry.core[3] = best_lexr[key];
    entry.core[4] = kPhrasePenalty;
    table.entries.emplace(key, std::move(entry));
  }
  return table;
}

// All of T with T's features, plus the T' entries absent from T.  Indicator
// features (came-from-T-only, came-from-T'-only, came-from-both) appended in
// that order, truncated to num_indicators.
inline PhraseTable merge_tables(const PhraseTable& t, const PhraseTable& tprime,
                                int num_indicators) {
  if (num_indicators < 1 || num_indicators > 3)
    throw ContractError("merge_tables: num_indicators must be 1, 2, or 3");

  PhraseTable merged;
  merged.merged = true;
  merged.num_indicators = num_indicators;
  for (const auto& [key, entry] : t.entries) {
    PhraseEntry e = entry;
    e.origin = tprime.entries.count(key) ? Origin::Both : Origin::TOnly;
    merged.entries.emplace(key, std::move(e));
  }
  for (const auto& [key, entry] : tprime.entries) {
    if (t.entries.count(key)) continue;
    PhraseEntry e = entry;
    e.origin = Origin::TPrimeOnly;
    merged.entries.emplace(key, std::move(e));
  }
  for (auto& [key, e] : merged.entries) {
    bool conds[3] = {e.origin == Origin::TOnly, e.origin == Origin::TPrimeOnly,
                     e.origin == Origin::Both};
    e.indicators.clear();
    for (int k = 0; k < num_indicators; ++k)
      e.indicators.push_back(conds[k] ? kIndicatorTrue : kIndicatorFalse);
  }
  return merged;
}

namespace detail {

inline std::string format_feature(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_table(const PhraseTable& table, std::ostream& out) {
  out << "# paramorph-table indicators=" << table.num_indicators
      << " pivot=" << (table.has_pivot ? 1 : 0)
      << " origin=" << (table.merged ? 1 : 0) << '\n';
  for (const auto& [key, entry] : table.entries) {
    out << key.first << " ||| " << key.second << " |||";
    for (double f : entry.features()) out << ' ' << detail::format_feature(f);
    if (table.merged) out << " ||| " << origin_name(entry.origin);
    out << '\n';
  }
}

inline PhraseTable read_table(std::istream& in) {
  PhraseTable table;
  bool header_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      // "# paramorph-table indicators=K pivot=B origin=B"
      auto grab = [&](const std::string& name) -> int {
        auto pos = line.find(name + "=");
        if (pos == std::string::npos) return 0;
        return std::atoi(line.c_str() + pos + name.size() + 1);
      };
      table.num_indicators = grab("indicators");
      table.has_pivot = grab("pivot") != 0;
      table.merged = grab("origin") != 0;
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      auto sep = line.find(" ||| ", pos);
      if (sep == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, sep - pos));
      pos = sep + 5;
    }
    if (fields.size() < 3)
      throw DataError("phrase table line " + std::to_string(lineno) +
                      ": expected 'src ||| tgt ||| features'");
    PhraseEntry entry;
    std::vector<double> feats;
    for (const std::string& tok : detail::split_ws(fields[2])) {
      double v = 0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw DataError("phrase table line " + std::to_string(lineno) +
                        ": bad feature value '" + tok + "'");
      feats.push_back(v);
    }
    if (!header_seen) {
      // No header: treat extras beyond the 5 core features as indicators.
      table.num_indicators =
          std::min(3, static_cast<int>(feats.size()) - 5);
      table.has_pivot = static_cast<int>(feats.size()) >
                        5 + table.num_indicators;
    }
    std::size_t expected = 5 + table.num_indicators + (table.has_pivot ? 1 : 0);
    if (feats.size() != expected)
      throw DataError("phrase table line " + std::to_string(lineno) + ": " +
                      std::to_string(feats.size()) + " features, expected " +
                      std::to_string(expected));
    std::copy(feats.begin(), feats.begin() + 5, entry.core.begin());
    entry.indicators.assign(feats.begin() + 5,
                            feats.begin() + 5 + table.num_indicators);
    if (table.has_pivot) entry.pivot = feats.back();
    if (fields.size() >= 4) {
      std::string o = fields[3];
      if (o == "T") entry.origin = Origin::TOnly;
      else if (o == "T'") entry.origin = Origin::TPrimeOnly;
      else if (o == "both") entry.origin = Origin::Both;
      else
        throw DataError("phrase table line " + std::to_string(lineno) +
                        ": unknown origin mark '" + o + "'");
    }
    table.entries.emplace(PhraseKey{fields[0], fields[1]}, std::move(entry));
  }
  return table;
}

}  // namespace paramorph
