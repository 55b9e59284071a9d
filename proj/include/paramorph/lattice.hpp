#pragma once

// Weighted acyclic word lattices over one sentence, their construction from
// per-word paraphrase sets, and a line-oriented text format (one lattice per
// line, one block of (label, weight, offset) triples per non-sink node).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "paramorph/corpus.hpp"
#include "paramorph/error.hpp"
#include "paramorph/morphology.hpp"

namespace paramorph {

struct LatticeArc {
  int from = 0;
  int to = 0;
  std::string label;
  double weight = 1.0;
  // Arcs a zero-weight configuration would score 0: emitted with weight 1
  // (the format range is (0,1]) and no penalty at decode time.
  bool unweighted = false;

  friend bool operator==(const LatticeArc& a, const LatticeArc& b) {
    return a.from == b.from && a.to == b.to && a.label == b.label &&
           a.weight == b.weight;
  }
};

struct Lattice {
  int node_count = 0;
  std::vector<LatticeArc> arcs;  // kept sorted by (from, to, label)

  void sort_arcs() {
    std::sort(arcs.begin(), arcs.end(),
              [](const LatticeArc& a, const LatticeArc& b) {
                if (a.from != b.from) return a.from < b.from;
                if (a.to != b.to) return a.to < b.to;
                return a.label < b.label;
              });
  }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.node_count == b.node_count && a.arcs == b.arcs;
  }
};

enum class LatticeMode {
  Full,         // pivot probabilities as arc weights
  LemmaOnly,    // lemma alternatives only, unweighted arcs
  ZeroWeights,  // all alternatives, unweighted arcs
};

// Pr(w'|w); nullopt when w is unseen in the pivot counts (no distribution).
using ProbFn =
    std::function<std::optional<double>(const std::string& form_surface,
                                        const std::string& word)>;

namespace detail {

// Lemma surface within one paraphrase set: shortest single-token variant.
inline std::string set_lemma(const ParaphraseSet& set) {
  std::string best = set.original;
  for (const FormVariant& v : set.variants) {
    if (v.tokens.size() != 1) continue;
    const std::string& s = v.tokens.front();
    if (s.size() < best.size() || (s.size() == best.size() && s < best))
      best = s;
  }
  return best;
}

}  // namespace detail

inline Lattice build_lattice(const Sentence& sentence, const FormsFn& forms_fn,
                             const ProbFn& prob_fn, LatticeMode mode) {
  if (sentence.tokens.empty())
    throw ContractError("build_lattice: empty sentence");

  struct Alt {
    std::vector<std::string> tokens;
    double weight;
    bool unweighted;
  };

  Lattice lat;
  int start = 0;  // start node of the current position
  for (const std::string& word : sentence.tokens) {
    ParaphraseSet forms = forms_fn(word);
    std::string lemma_surface =
        mode == LatticeMode::LemmaOnly ? detail::set_lemma(forms) : "";

    std::vector<Alt> alts;
    for (const FormVariant& v : forms.variants) {
      if (v.is_original()) continue;
      std::string surface = v.surface();
      switch (mode) {
        case LatticeMode::Full: {
          std::optional<double> p = prob_fn(surface, word);
          if (!p) {
            // Unseen word: no pivot distribution exists, keep the
            // alternative reachable without a weight penalty.
            alts.push_back({v.tokens, 1.0, true});
          } else if (*p > 0.0) {
            alts.push_back({v.tokens, *p, false});
          }
          break;
        }
        case LatticeMode::LemmaOnly:
          if (surface == lemma_surface && surface != word)
            alts.push_back({v.tokens, 1.0, true});
          break;
        case LatticeMode::ZeroWeights:
          alts.push_back({v.tokens, 1.0, true});
          break;
      }
    }

    // Merge duplicate single-token alternatives, keeping the best weight.
    std::vector<Alt> kept;
    for (Alt& a : alts) {
      if (a.tokens.size() == 1 && a.tokens.front() == word) continue;
      bool merged = false;
      for (Alt& k : kept) {
        if (k.tokens.size() == 1 && a.tokens.size() == 1 &&
            k.tokens == a.tokens) {
          k.weight = std::max(k.weight, a.weight);
          k.unweighted = k.unweighted || a.unweighted;
          merged = true;
          break;
        }
      }
      if (!merged) kept.push_back(std::move(a));
    }

    int intermediates = 0;
    for (const Alt& a : kept)
      intermediates += static_cast<int>(a.tokens.size()) - 1;
    int next_start = start + 1 + intermediates;

    lat.arcs.push_back({start, next_start, word, 1.0, false});
    int scratch = start + 1;  // intermediate nodes follow the start node
    for (const Alt& a : kept) {
      int from = start;
      for (std::size_t t = 0; t < a.tokens.size(); ++t) {
        bool last = t + 1 == a.tokens.size();
        int to = last ? next_start : scratch++;
        lat.arcs.push_back({from, to, a.tokens[t],
                            t == 0 ? a.weight : 1.0,
                            t == 0 ? a.unweighted : false});
        from = to;
      }
    }
    start = next_start;
  }
  lat.node_count = start + 1;
  lat.sort_arcs();
  return lat;
}

inline long long count_paths(const Lattice& lat) {
  std::vector<long long> paths(lat.node_count, 0);
  paths[lat.node_count - 1] = 1;
  for (int n = lat.node_count - 2; n >= 0; --n)
    for (const LatticeArc& arc : lat.arcs)
      if (arc.from == n) paths[n] += paths[arc.to];
  return paths[0];
}

namespace detail {

inline std::string format_weight(double w) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, res.ptr);
}

inline std::string quote_label(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

}  // namespace detail

inline std::string serialize_lattice(const Lattice& lat) {
  if (lat.node_count < 2) throw ContractError("serialize_lattice: no arcs");
  std::vector<std::vector<const LatticeArc*>> blocks(lat.node_count - 1);
  for (const LatticeArc& arc : lat.arcs) {
    if (arc.from < 0 || arc.from >= lat.node_count - 1 || arc.to <= arc.from ||
        arc.to >= lat.node_count)
      throw ContractError("serialize_lattice: arc outside the node range");
    blocks[arc.from].push_back(&arc);
  }
  std::string out = "(";
  for (int n = 0; n < lat.node_count - 1; ++n) {
    if (n) out += ",";
    out += "(";
    for (std::size_t k = 0; k < blocks[n].size(); ++k) {
      const LatticeArc& arc = *blocks[n][k];
      if (k) out += ",";
      out += "(" + detail::quote_label(arc.label) + "," +
             detail::format_weight(arc.weight) + "," +
             std::to_string(arc.to - arc.from) + ")";
    }
    out += ")";
  }
  out += ")";
  return out;
}

inline Lattice parse_lattice(const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> void {
    throw DataError("lattice parse error at position " + std::to_string(pos) +
                    ": " + what);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  };
  auto peek = [&](char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  };

  Lattice lat;
  std::vector<std::vector<LatticeArc>> blocks;
  expect('(');
  while (!peek(')')) {
    blocks.emplace_back();
    expect('(');
    while (!peek(')')) {
      expect('(');
      // label
      skip_ws();
      if (pos >= text.size() || text[pos] != '\'') fail("expected label");
      ++pos;
      std::string label;
      while (pos < text.size() && text[pos] != '\'') {
        if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
        label += text[pos++];
      }
      if (pos >= text.size()) fail("unterminated label");
      ++pos;
      if (label.empty()) fail("empty label");
      expect(',');
      // weight
      skip_ws();
      double weight = 0;
      auto res = std::from_chars(text.data() + pos, text.data() + text.size(),
                                 weight);
      if (res.ec != std::errc{}) fail("bad weight");
      pos = static_cast<std::size_t>(res.ptr - text.data());
      if (!(weight > 0.0) || weight > 1.0) fail("weight outside (0,1]");
      expect(',');
      // offset
      skip_ws();
      int offset = 0;
      res = std::from_chars(text.data() + pos, text.data() + text.size(),
                            offset);
      if (res.ec != std::errc{}) fail("bad offset");
      pos = static_cast<std::size_t>(res.ptr - text.data());
      if (offset < 1) fail("offset must be >= 1");
      expect(')');
      int from = static_cast<int>(blocks.size()) - 1;
      blocks.back().push_back({from, from + offset, label, weight, false});
      if (peek(',')) ++pos;
    }
    expect(')');
    if (peek(',')) ++pos;
  }
  expect(')');
  skip_ws();
  if (pos != text.size()) fail("trailing characters");
  if (blocks.empty()) fail("empty lattice");

  lat.node_count = static_cast<int>(blocks.size()) + 1;
  for (auto& block : blocks)
    for (LatticeArc& arc : block) {
      if (arc.to >= lat.node_count) fail("arc offset past the sink node");
      lat.arcs.push_back(std::move(arc));
    }

  // Every node must lie on a source-to-sink path.
  std::vector<char> fwd(lat.node_count, 0), bwd(lat.node_count, 0);
  fwd[0] = 1;
  for (const LatticeArc& arc : lat.arcs)
    if (fwd[arc.from]) fwd[arc.to] = 1;
  bwd[lat.node_count - 1] = 1;
  for (auto it = lat.arcs.rbegin(); it != lat.arcs.rend(); ++it)
    if (bwd[it->to]) bwd[it->from] = 1;
  for (int n = 0; n < lat.node_count; ++n)
    if (!fwd[n] || !bwd[n])
      throw DataError("lattice parse error: dangling node " +
                      std::to_string(n));

  lat.sort_arcs();
  return lat;
}

}  // namespace paramorph
