#pragma once

// Minimal monotone lattice decoder: dynamic programming over lattice nodes,
// consuming sub-paths that match phrase-table source phrases, under a
// log-linear score with a lattice-weight feature and a word penalty.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paramorph/error.hpp"
#include "paramorph/lattice.hpp"
#include "paramorph/phrasetable.hpp"

namespace paramorph {

enum class OovPolicy { CopyThrough, Fail };

struct DecodeStep {
  int from = 0;
  int to = 0;
  std::vector<std::string> src;  // consumed lattice labels
  std::vector<std::string> tgt;  // emitted target tokens
  bool oov = false;
  double lattice_log = 0.0;  // sum of log arc weights on the sub-path
};

struct DecodeResult {
  std::vector<std::string> tokens;
  double score = 0.0;
  std::vector<DecodeStep> derivation;
};

struct DecoderWeights {
  std::vector<double> table;  // one per table feature
  double lattice = 1.0;
  double word_penalty = 1.0;

  static DecoderWeights from_vector(const std::vector<double>& w,
                                    int table_features) {
    if (static_cast<int>(w.size()) != table_features + 2)
      throw ContractError("decoder weights: expected " +
                          std::to_string(table_features + 2) + " weights, got " +
                          std::to_string(w.size()));
    DecoderWeights dw;
    dw.table.assign(w.begin(), w.end() - 2);
    dw.lattice = w[w.size() - 2];
    dw.word_penalty = w.back();
    return dw;
  }
};

namespace detail {

struct SubPath {
  int to;
  std::vector<std::string> labels;
  double lattice_log;
};

// All sub-paths out of `from` with at most max_arcs arcs.
inline void enumerate_subpaths(
    const std::vector<std::vector<const LatticeArc*>>& out_arcs, int from,
    int max_arcs, std::vector<SubPath>& result) {
  std::vector<SubPath> frontier{{from, {}, 0.0}};
  for (int depth = 0; depth < max_arcs && !frontier.empty(); ++depth) {
    std::vector<SubPath> next;
    for (const SubPath& sp : frontier) {
      for (const LatticeArc* arc : out_arcs[sp.to]) {
        SubPath ext = sp;
        ext.to = arc->to;
        ext.labels.push_back(arc->label);
        if (!arc->unweighted) ext.lattice_log += std::log(arc->weight);
        result.push_back(ext);
        next.push_back(std::move(ext));
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace detail

inline double score_step(const DecodeStep& step, const PhraseEntry* entry,
                         const DecoderWeights& w) {
  double s = w.lattice * step.lattice_log +
             w.word_penalty * static_cast<double>(step.tgt.size());
  if (entry) {
    std::vector<double> feats = entry->features();
    for (std::size_t k = 0; k < feats.size(); ++k)
      s += w.table[k] * std::log(feats[k]);
  }
  return s;
}

inline DecodeResult decode(const Lattice& lat, const PhraseTable& table,
                           const std::vector<double>& weights,
                           OovPolicy oov_policy = OovPolicy::CopyThrough,
                           int max_src_len = 7) {
  DecoderWeights w = DecoderWeights::from_vector(weights,
                                                 table.feature_count());

  // source phrase -> table entries
  std::map<std::string, std::vector<std::pair<const std::string*,
                                              const PhraseEntry*>>> by_src;
  for (const auto& [key, entry] : table.entries)
    by_src[key.first].emplace_back(&key.second, &entry);

  std::vector<std::vector<const LatticeArc*>> out_arcs(lat.node_count);
  for (const LatticeArc& arc : lat.arcs) out_arcs[arc.from].push_back(&arc);

  struct State {
    bool reachable = false;
    double score = 0.0;
    std::string target;  // tie-break key
    std::vector<DecodeStep> derivation;
  };
  std::vector<State> best(lat.node_count);
  best[0].reachable = true;

  for (int node = 0; node < lat.node_count - 1; ++node) {
    if (!best[node].reachable) continue;
    std::vector<detail::SubPath> subpaths;
    detail::enumerate_subpaths(out_arcs, node, max_src_len, subpaths);
    for (const detail::SubPath& sp : subpaths) {
      std::string src_surface = detail::join(sp.labels);
      std::vector<std::pair<std::vector<std::string>, const PhraseEntry*>>
          expansions;
      auto it = by_src.find(src_surface);
      if (it != by_src.end()) {
        for (const auto& [tgt, entry] : it->second)
          expansions.emplace_back(detail::split_ws(*tgt), entry);
      } else if (sp.labels.size() == 1 &&
                 oov_policy == OovPolicy::CopyThrough) {
        expansions.emplace_back(sp.labels, nullptr);  // copy the token through
      }
      for (auto& [tgt, entry] : expansions) {
        DecodeStep step{node, sp.to, sp.labels, tgt, entry == nullptr,
                        sp.lattice_log};
        double cand_score = best[node].score + score_step(step, entry, w);
        std::string cand_target = best[node].target;
        if (!cand_target.empty() && !tgt.empty()) cand_target += ' ';
        cand_target += detail::join(tgt);
        State& dst = best[sp.to];
        bool better =
            !dst.reachable || cand_score > dst.score ||
            (cand_score == dst.score && cand_target < dst.target);
        if (better) {
          dst.reachable = true;
          dst.score = cand_score;
          dst.target = std::move(cand_target);
          dst.derivation = best[node].derivation;
          dst.derivation.push_back(std::move(step));
        }
      }
    }
  }

  const State& sink = best[lat.node_count - 1];
  if (!sink.reachable) {
    int first_stuck = 0;
    for (int n = lat.node_count - 1; n >= 0; --n)
      if (!best[n].reachable) first_stuck = n;
    throw DataError("decode: no derivation covers node " +
                    std::to_string(first_stuck));
  }

  DecodeResult result;
  result.tokens = detail::split_ws(sink.target);
  result.score = sink.score;
  result.derivation = sink.derivation;
  return result;
}

// Recomputes a derivation's score from scratch; decode() output satisfies
// rescore(result) == result.score.
inline double rescore(const DecodeResult& result, const PhraseTable& table,
                      const std::vector<double>& weights) {
  DecoderWeights w = DecoderWeights::from_vector(weights,
                                                 table.feature_count());
  double s = 0.0;
  for (const DecodeStep& step : result.derivation) {
    const PhraseEntry* entry = nullptr;
    if (!step.oov) {
      auto it = table.entries.find(
          PhraseKey{detail::join(step.src), detail::join(step.tgt)});
      if (it == table.entries.end())
        throw InternalError("rescore: derivation step not in table");
      entry = &it->second;
    }
    s += score_step(step, entry, w);
  }
  return s;
}

}  // namespace paramorph
