#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "paramorph/decoder.hpp"
#include "test_support.hpp"

using namespace paramorph;
using test_support::sent;
using test_support::table_forms;

namespace {

PhraseTable toy_table(std::vector<std::pair<std::string, std::string>> rows) {
  PhraseTable t;
  for (auto& [s, e] : rows) {
    PhraseEntry entry;
    // unit probabilities, real penalty: each table step scores log(e) = 1
    entry.core = {1, 1, 1, 1, kPhrasePenalty};
    t.entries.emplace(PhraseKey{s, e}, entry);
  }
  return t;
}

std::vector<double> unit_weights(const PhraseTable& t) {
  return std::vector<double>(t.feature_count() + 2, 1.0);
}

Lattice linear(const std::string& text) {
  return build_lattice(sent(text), table_forms({}),
                       [](const std::string&, const std::string&) {
                         return std::optional<double>(1.0);
                       },
                       LatticeMode::Full);
}

// Exhaustive reference: enumerate every complete (path x segmentation x
// table entry) derivation and keep the best score, tie-broken by target.
struct Exhaustive {
  const Lattice& lat;
  const PhraseTable& table;
  DecoderWeights w;
  OovPolicy oov;
  bool found = false;
  double best_score = 0.0;
  std::string best_target;

  void run() {
    walk(0, 0.0, "");
  }

  void walk(int node, double score, const std::string& target) {
    if (node == lat.node_count - 1) {
      std::string trimmed = detail::join(detail::split_ws(target));
      if (!found || score > best_score ||
          (score == best_score && trimmed < best_target)) {
        found = true;
        best_score = score;
        best_target = trimmed;
      }
      return;
    }
    std::vector<detail::SubPath> frontier{{node, {}, 0.0}};
    for (int depth = 0; depth < 7 && !frontier.empty(); ++depth) {
      std::vector<detail::SubPath> next;
      for (const detail::SubPath& sp : frontier) {
        for (const LatticeArc& arc : lat.arcs) {
          if (arc.from != sp.to) continue;
          detail::SubPath ext = sp;
          ext.to = arc.to;
          ext.labels.push_back(arc.label);
          if (!arc.unweighted) ext.lattice_log += std::log(arc.weight);
          consume(ext, score, target);
          next.push_back(std::move(ext));
        }
      }
      frontier = std::move(next);
    }
  }

  void consume(const detail::SubPath& sp, double score,
               const std::string& target) {
    std::string src = detail::join(sp.labels);
    bool matched = false;
    for (const auto& [key, entry] : table.entries) {
      if (key.first != src) continue;
      matched = true;
      DecodeStep step{0, sp.to, sp.labels, detail::split_ws(key.second),
                      false, sp.lattice_log};
      walk(sp.to, score + score_step(step, &entry, w),
           target + " " + key.second);
    }
    if (!matched && sp.labels.size() == 1 && oov == OovPolicy::CopyThrough) {
      DecodeStep step{0, sp.to, sp.labels, sp.labels, true, sp.lattice_log};
      walk(sp.to, score + score_step(step, nullptr, w),
           target + " " + src);
    }
  }
};

}  // namespace

TEST_CASE("linear lattice with a covering table decodes directly") {
  PhraseTable t = toy_table({{"a", "A"}, {"b", "B"}});
  DecodeResult r = decode(linear("a b"), t, unit_weights(t));
  CHECK(r.tokens == std::vector<std::string>{"A", "B"});
  CHECK(rescore(r, t, unit_weights(t)) == Catch::Approx(r.score));
}

TEST_CASE("an OOV word with a translated paraphrase arc gets translated") {
  FormsFn forms = table_forms({{"bekalan-bekalan", {{"bekalan"}}}});
  ProbFn unseen = [](const std::string&,
                     const std::string& w) -> std::optional<double> {
    if (w == "bekalan-bekalan") return std::nullopt;
    return std::optional<double>(1.0);
  };
  Lattice lat = build_lattice(sent("bekalan-bekalan lain"), forms, unseen,
                              LatticeMode::Full);
  PhraseTable t = toy_table({{"bekalan", "supply"}, {"lain", "other"}});
  DecodeResult r = decode(lat, t, unit_weights(t));
  CHECK(r.tokens == std::vector<std::string>{"supply", "other"});

  // without the paraphrase arc the OOV token is copied through
  DecodeResult base = decode(linear("bekalan-bekalan lain"), t,
                             unit_weights(t));
  CHECK(base.tokens == std::vector<std::string>{"bekalan-bekalan", "other"});
}

TEST_CASE("empty table copies the best lattice path through") {
  PhraseTable empty;
  DecodeResult r = decode(linear("x y"), empty, unit_weights(empty));
  CHECK(r.tokens == std::vector<std::string>{"x", "y"});
  for (const DecodeStep& s : r.derivation) CHECK(s.oov);
}

TEST_CASE("oov policy fail names the first uncoverable node") {
  PhraseTable t = toy_table({{"a", "A"}});
  CHECK_THROWS_WITH(decode(linear("a zzz"), t, unit_weights(t),
                           OovPolicy::Fail),
                    Catch::Matchers::ContainsSubstring("node 2"));
}

TEST_CASE("multi-word table phrases beat word-by-word when weighted") {
  PhraseTable t = toy_table({{"a", "A"}, {"b", "B"}, {"a b", "AB"}});
  // per-target-word reward makes the two-step derivation win
  DecodeResult r = decode(linear("a b"), t, unit_weights(t));
  CHECK(r.tokens == std::vector<std::string>{"A", "B"});

  // negative word penalty prefers the shorter output
  std::vector<double> w = unit_weights(t);
  w.back() = -2.0;
  DecodeResult shorter = decode(linear("a b"), t, w);
  CHECK(shorter.tokens == std::vector<std::string>{"AB"});
}

TEST_CASE("ties break by target string order") {
  PhraseTable t = toy_table({{"a", "Z"}, {"a", "B"}});
  DecodeResult r = decode(linear("a"), t, unit_weights(t));
  CHECK(r.tokens == std::vector<std::string>{"B"});
}

TEST_CASE("weight vector arity is enforced") {
  PhraseTable t = toy_table({{"a", "A"}});
  CHECK_THROWS_AS(decode(linear("a"), t, {1.0, 1.0}), ContractError);
}

TEST_CASE("decoder matches exhaustive enumeration on small instances") {
  std::mt19937 rng(5);
  static const std::vector<std::string> tgt = {"A", "B", "C"};
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> len(1, 3), coin(0, 1), pick3(0, 2);
    std::uniform_real_distribution<double> prob(0.1, 1.0);

    // random sentence with at most one single-token variant per word
    Sentence s;
    std::map<std::string, std::vector<std::vector<std::string>>> variants;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      std::string wtok = "w" + std::to_string(i);
      s.tokens.push_back(wtok);
      if (coin(rng)) variants[wtok] = {{wtok + "v"}};
    }
    double p = prob(rng);
    Lattice lat = build_lattice(
        s, table_forms(variants),
        [p](const std::string&, const std::string&) {
          return std::optional<double>(p);
        },
        LatticeMode::Full);

    // random table over the lattice labels with random features
    PhraseTable table;
    for (const LatticeArc& arc : lat.arcs) {
      if (coin(rng)) continue;
      PhraseEntry e;
      for (int k = 0; k < 5; ++k) e.core[k] = prob(rng);
      table.entries.emplace(PhraseKey{arc.label, tgt[pick3(rng)]}, e);
    }
    std::vector<double> weights(table.feature_count() + 2);
    for (double& w : weights) w = prob(rng);

    DecoderWeights dw = DecoderWeights::from_vector(
        weights, table.feature_count());
    Exhaustive ref{lat, table, dw, OovPolicy::CopyThrough};
    ref.run();
    REQUIRE(ref.found);

    DecodeResult got = decode(lat, table, weights);
    CHECK(got.score == Catch::Approx(ref.best_score).margin(1e-9));
    CHECK(detail::join(got.tokens) == ref.best_target);
    CHECK(rescore(got, table, weights) == Catch::Approx(got.score));
  }
}

TEST_CASE("raising the lattice weight favors the higher-probability path") {
  FormsFn forms = table_forms({{"ab", {{"a"}}}});
  Lattice lat = build_lattice(
      sent("ab"), forms,
      [](const std::string&, const std::string&) {
        return std::optional<double>(0.5);
      },
      LatticeMode::Full);
  // both paths covered by entries with identical features
  PhraseTable t = toy_table({{"ab", "X"}, {"a", "X"}});
  for (double lattice_weight : {1.0, 2.0, 8.0}) {
    std::vector<double> w = unit_weights(t);
    w[w.size() - 2] = lattice_weight;
    DecodeResult r = decode(lat, t, w);
    REQUIRE(r.derivation.size() == 1);
    CHECK(r.derivation[0].src == std::vector<std::string>{"ab"});
  }
}
