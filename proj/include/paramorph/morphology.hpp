#pragma once

// Reverse Malay morphology: given a word, produce the morphologically simpler
// words and alternative segmentations reachable by undoing affixation,
// compounding, reduplication, and clitic attachment.  Dash segmentation is
// blocked for reduplications via the LCS ratio guard.

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "paramorph/error.hpp"

namespace paramorph {

enum class Rule {
  Original,
  Affix,        // (a) prefix / suffix / circumfix stripping
  Compound,     // (b) components of a concatenated compound
  Redup,        // (c) either side of a dash
  CliticStrip,  // (d)
  CliticSeg,    // (e)
  DashSeg,      // (f) dash as a standalone token
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Original: return "ORIGINAL";
    case Rule::Affix: return "AFFIX";
    case Rule::Compound: return "COMPOUND";
    case Rule::Redup: return "REDUP";
    case Rule::CliticStrip: return "CLITIC_STRIP";
    case Rule::CliticSeg: return "CLITIC_SEG";
    case Rule::DashSeg: return "DASH_SEG";
  }
  return "?";
}

struct FormVariant {
  std::vector<std::string> tokens;
  std::set<Rule> rules;

  std::string surface() const {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) s += ' ';
      s += tokens[i];
    }
    return s;
  }

  bool is_original() const { return rules.count(Rule::Original) > 0; }
};

// Exact rational, kept unreduced as |LCS| / min(|l|,|r|).
struct Ratio {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / den; }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend bool operator<(const Ratio& a, const Ratio& b) {
    return a.num * b.den < b.num * a.den;
  }
};

struct Circumfix {
  std::string pre;  // may be archiphonemic (peN, meN)
  std::string suf;
};

struct RuleConfig {
  std::vector<std::string> prefixes;  // entries may be archiphonemic
  std::vector<std::string> suffixes;
  std::vector<Circumfix> circumfixes;
  std::vector<std::string> enclitics;
  std::vector<std::string> proclitics;
  // Archiphoneme prefix -> surface allomorphs, e.g. peN -> pe, pem, ..., pel.
  std::map<std::string, std::vector<std::string>> nasal_replacements;
  std::size_t min_stem_length = 2;
  std::unordered_set<std::string> vocab;  // empty = length gate only
  Ratio lcs_threshold{1, 2};
  int closure_depth = 4;
  bool compound_split = true;
  bool emit_segmented_compound = false;
  std::size_t min_compound_part = 3;

  // The standard Malay/Indonesian inventory.
  static RuleConfig standard() {
    RuleConfig cfg;
    cfg.prefixes = {"meN", "peN", "ber", "ter", "di", "ke", "se", "per",
                    "memper"};
    cfg.suffixes = {"kan", "an", "i"};
    cfg.circumfixes = {{"ke", "an"},  {"peN", "an"}, {"per", "an"},
                       {"ber", "an"}, {"meN", "kan"}, {"meN", "i"},
                       {"di", "kan"}, {"di", "i"}};
    cfg.enclitics = {"nya", "lah", "kah", "ku", "mu"};
    cfg.proclitics = {"ku", "kau"};
    cfg.nasal_replacements = {
        {"meN", {"me", "mem", "men", "meng", "meny", "menge"}},
        {"peN", {"pe", "pem", "pen", "peng", "peny", "penge", "pel"}}};
    return cfg;
  }

  // Lemmatizer-style profile: the full inventory.
  static RuleConfig lemmatizer_profile() { return standard(); }

  // Stemmer-style profile: affix and clitic handling only, no compound
  // splitting, no circumfix layer.
  static RuleConfig stemmer_profile() {
    RuleConfig cfg = standard();
    cfg.circumfixes.clear();
    cfg.compound_split = false;
    return cfg;
  }
};

inline std::unordered_set<std::string> load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  std::unordered_set<std::string> vocab;
  std::string word;
  while (in >> word) {
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    vocab.insert(word);
  }
  return vocab;
}

inline std::size_t lcs_length(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// |LCS(l,r)| / min(|l|,|r|), exact.
inline Ratio lcs_ratio(const std::string& l, const std::string& r) {
  if (l.empty() || r.empty())
    throw ContractError("lcs_ratio requires non-empty strings");
  return Ratio{static_cast<long>(lcs_length(l, r)),
               static_cast<long>(std::min(l.size(), r.size()))};
}

namespace detail {

// Position of the single internal dash, or nullopt if the word has no dash,
// a boundary dash, or more than one dash.
inline std::optional<std::size_t> single_dash(const std::string& word) {
  auto pos = word.find('-');
  if (pos == std::string::npos || pos == 0 || pos + 1 == word.size())
    return std::nullopt;
  if (word.find('-', pos + 1) != std::string::npos) return std::nullopt;
  return pos;
}

inline bool accept_stem(const std::string& stem, const RuleConfig& cfg) {
  if (stem.size() < cfg.min_stem_length) return false;
  return cfg.vocab.empty() || cfg.vocab.count(stem) > 0;
}

// Candidate stems after removing a surface allomorph: the remainder as-is,
// plus the nasal-restored form (mem+baca vs. mem+(p)ukul -> memukul).
inline std::vector<std::string> restore_stems(const std::string& allomorph,
                                              const std::string& rest) {
  std::vector<std::string> out{rest};
  char initial = 0;
  if (allomorph == "mem" || allomorph == "pem") initial = 'p';
  else if (allomorph == "men" || allomorph == "pen") initial = 't';
  else if (allomorph == "meng" || allomorph == "peng") initial = 'k';
  else if (allomorph == "meny" || allomorph == "peny") initial = 's';
  if (initial) out.push_back(std::string(1, initial) + rest);
  return out;
}

// Surface realizations of a (possibly archiphonemic) prefix string.
inline std::vector<std::string> prefix_surfaces(const std::string& prefix,
                                                const RuleConfig& cfg) {
  auto it = cfg.nasal_replacements.find(prefix);
  if (it != cfg.nasal_replacements.end()) return it->second;
  return {prefix};
}

inline void add_variant(std::map<std::string, FormVariant>& out,
                        std::vector<std::string> tokens, Rule rule) {
  FormVariant v{std::move(tokens), {rule}};
  auto [it, inserted] = out.emplace(v.surface(), std::move(v));
  if (!inserted) it->second.rules.insert(rule);
}

}  // namespace detail

// True iff rule (f) may split this word at its dash.
inline bool dash_seg_allowed(const std::string& word, const RuleConfig& cfg) {
  auto pos = detail::single_dash(word);
  if (!pos) return false;
  return lcs_ratio(word.substr(0, *pos), word.substr(*pos + 1)) <
         cfg.lcs_threshold;
}

// One application of every applicable rule to a single token.  Inapplicable
// rules contribute nothing.
inline std::vector<FormVariant> expand_once(const std::string& word,
                                            const RuleConfig& cfg) {
  if (word.empty() || word.find(' ') != std::string::npos)
    throw ContractError("expand_once expects a single non-empty token");
  std::map<std::string, FormVariant> out;

  // (a) affix stripping, one layer.
  for (const std::string& prefix : cfg.prefixes) {
    for (const std::string& surf : detail::prefix_surfaces(prefix, cfg)) {
      if (word.size() <= surf.size() || word.compare(0, surf.size(), surf) != 0)
        continue;
      for (const std::string& stem :
           detail::restore_stems(surf, word.substr(surf.size())))
        if (detail::accept_stem(stem, cfg) && stem != word)
          detail::add_variant(out, {stem}, Rule::Affix);
    }
  }
  for (const std::string& suffix : cfg.suffixes) {
    if (word.size() <= suffix.size() ||
        word.compare(word.size() - suffix.size(), suffix.size(), suffix) != 0)
      continue;
    std::string stem = word.substr(0, word.size() - suffix.size());
    if (detail::accept_stem(stem, cfg))
      detail::add_variant(out, {stem}, Rule::Affix);
  }
  for (const Circumfix& cx : cfg.circumfixes) {
    for (const std::string& surf : detail::prefix_surfaces(cx.pre, cfg)) {
      if (word.size() <= surf.size() + cx.suf.size()) continue;
      if (word.compare(0, surf.size(), surf) != 0) continue;
      if (word.compare(word.size() - cx.suf.size(), cx.suf.size(), cx.suf) != 0)
        continue;
      std::string middle =
          word.substr(surf.size(), word.size() - surf.size() - cx.suf.size());
      for (const std::string& stem : detail::restore_stems(surf, middle))
        if (detail::accept_stem(stem, cfg) && stem != word)
          detail::add_variant(out, {stem}, Rule::Affix);
    }
  }

  // (b) compound components; requires an attesting vocabulary.
  if (cfg.compound_split && !cfg.vocab.empty() &&
      word.find('-') == std::string::npos) {
    for (std::size_t k = cfg.min_compound_part;
         k + cfg.min_compound_part <= word.size(); ++k) {
      std::string l = word.substr(0, k), r = word.substr(k);
      if (cfg.vocab.count(l) == 0 || cfg.vocab.count(r) == 0) continue;
      detail::add_variant(out, {l}, Rule::Compound);
      detail::add_variant(out, {r}, Rule::Compound);
      if (cfg.emit_segmented_compound)
        detail::add_variant(out, {l, r}, Rule::Compound);
    }
  }

  // (c) either side of the dash.
  if (auto pos = detail::single_dash(word)) {
    detail::add_variant(out, {word.substr(0, *pos)}, Rule::Redup);
    detail::add_variant(out, {word.substr(*pos + 1)}, Rule::Redup);
  }

  // (d)/(e) clitics.
  for (const std::string& cl : cfg.enclitics) {
    if (word.size() <= cl.size() ||
        word.compare(word.size() - cl.size(), cl.size(), cl) != 0)
      continue;
    std::string stem = word.substr(0, word.size() - cl.size());
    if (!detail::accept_stem(stem, cfg)) continue;
    detail::add_variant(out, {stem}, Rule::CliticStrip);
    detail::add_variant(out, {stem, cl}, Rule::CliticSeg);
  }
  for (const std::string& cl : cfg.proclitics) {
    if (word.size() <= cl.size() || word.compare(0, cl.size(), cl) != 0)
      continue;
    std::string stem = word.substr(cl.size());
    if (!detail::accept_stem(stem, cfg)) continue;
    detail::add_variant(out, {stem}, Rule::CliticStrip);
    detail::add_variant(out, {cl, stem}, Rule::CliticSeg);
  }

  // (f) dash as a standalone token, reduplications excluded.
  if (dash_seg_allowed(word, cfg)) {
    auto pos = *detail::single_dash(word);
    detail::add_variant(out, {word.substr(0, pos), "-", word.substr(pos + 1)},
                        Rule::DashSeg);
  }

  std::vector<FormVariant> result;
  result.reserve(out.size());
  for (auto& [surface, v] : out)
    if (surface != word) result.push_back(std::move(v));
  return result;
}

struct ParaphraseSet {
  std::string original;
  std::vector<FormVariant> variants;  // sorted by surface, duplicates merged

  const FormVariant* find(const std::string& surface) const {
    for (const FormVariant& v : variants)
      if (v.surface() == surface) return &v;
    return nullptr;
  }

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(variants.size());
    for (const FormVariant& v : variants) out.push_back(v.surface());
    return out;
  }
};

using FormsFn = std::function<ParaphraseSet(const std::string&)>;

// Closure of expand_once up to cfg.closure_depth, applied per token of
// intermediate multi-token variants.  Always contains the original word.
inline ParaphraseSet generate_forms(const std::string& word,
                                    const RuleConfig& cfg) {
  if (word.empty() || word.find(' ') != std::string::npos)
    throw ContractError("generate_forms expects a single non-empty token");

  std::map<std::string, FormVariant> result;
  result.emplace(word, FormVariant{{word}, {Rule::Original}});

  std::vector<FormVariant> frontier{FormVariant{{word}, {Rule::Original}}};
  for (int depth = 0; depth < cfg.closure_depth && !frontier.empty(); ++depth) {
    std::vector<FormVariant> next;
    for (const FormVariant& v : frontier) {
      for (std::size_t i = 0; i < v.tokens.size(); ++i) {
        if (v.tokens[i] == "-") continue;
        for (const FormVariant& e : expand_once(v.tokens[i], cfg)) {
          FormVariant child;
          child.tokens.reserve(v.tokens.size() + e.tokens.size() - 1);
          child.tokens.insert(child.tokens.end(), v.tokens.begin(),
                              v.tokens.begin() + i);
          child.tokens.insert(child.tokens.end(), e.tokens.begin(),
                              e.tokens.end());
          child.tokens.insert(child.tokens.end(), v.tokens.begin() + i + 1,
                              v.tokens.end());
          child.rules = v.rules;
          child.rules.erase(Rule::Original);
          child.rules.insert(e.rules.begin(), e.rules.end());
          std::string surface = child.surface();
          if (surface == word) continue;  // converged back to the original
          auto [it, inserted] = result.emplace(surface, child);
          if (inserted)
            next.push_back(std::move(child));
          else
            it->second.rules.insert(child.rules.begin(), child.rules.end());
        }
      }
    }
    frontier = std::move(next);
  }

  ParaphraseSet set;
  set.original = word;
  set.variants.reserve(result.size());
  for (auto& [surface, v] : result) set.variants.push_back(std::move(v));
  return set;
}

// Union of forms over several analyzer profiles.
inline ParaphraseSet generate_forms_union(const std::string& word,
                                          const std::vector<RuleConfig>& cfgs) {
  std::map<std::string, FormVariant> merged;
  for (const RuleConfig& cfg : cfgs) {
    for (FormVariant& v : generate_forms(word, cfg).variants) {
      auto [it, inserted] = merged.emplace(v.surface(), v);
      if (!inserted) it->second.rules.insert(v.rules.begin(), v.rules.end());
    }
  }
  ParaphraseSet set;
  set.original = word;
  for (auto& [surface, v] : merged) set.variants.push_back(std::move(v));
  return set;
}

// Shortest single-token variant under maximal rule application; ties broken
// lexicographically, the word itself if nothing applies.
inline std::string lemma(const std::string& word, const RuleConfig& cfg) {
  std::string best = word;
  for (const FormVariant& v : generate_forms(word, cfg).variants) {
    if (v.tokens.size() != 1) continue;
    const std::string& s = v.tokens.front();
    if (s.size() < best.size() || (s.size() == best.size() && s < best))
      best = s;
  }
  return best;
}

}  // namespace paramorph
