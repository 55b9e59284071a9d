#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "paramorph/pivotphrase.hpp"
#include "test_support.hpp"

using namespace paramorph;
using test_support::table_forms;

namespace {

std::vector<PhraseOccurrence> occs_from(
    std::vector<std::pair<std::string, std::string>> rows) {
  std::vector<PhraseOccurrence> out;
  for (auto& [s, e] : rows)
    out.push_back({detail::split_ws(s), detail::split_ws(e), {}});
  return out;
}

PhraseFormsIndex index_from(
    std::map<std::string, std::set<std::string>> reducible_to) {
  PhraseFormsIndex idx;
  idx.reducible_to = std::move(reducible_to);
  return idx;
}

}  // namespace

TEST_CASE("collect_phrase_counts aggregates the occurrence list") {
  PhrasePivotCounts c = collect_phrase_counts(
      occs_from({{"a b", "A"}, {"a b", "A"}, {"c", "A"}}));
  CHECK(c.cooc["a b"]["A"] == 2);
  CHECK(c.by_malay["a b"] == 2);
  CHECK(c.by_english["A"] == 3);
}

TEST_CASE("par substitutes one token") {
  FormsFn forms = table_forms({{"abc-abc", {{"abc"}}}});
  auto got = par({"abc-abc", "def"}, forms);
  CHECK(got == std::set<std::vector<std::string>>{{"abc", "def"}});
}

TEST_CASE("par substitutes every non-empty subset") {
  FormsFn forms = table_forms({{"ab", {{"a"}}}, {"cd", {{"c"}}}});
  auto got = par({"ab", "cd"}, forms);
  CHECK(got == std::set<std::vector<std::string>>{
                   {"a", "cd"}, {"ab", "c"}, {"a", "c"}});
}

TEST_CASE("par of an irreducible phrase is empty") {
  CHECK(par({"x", "y"}, table_forms({})).empty());
  CHECK_THROWS_AS(par({}, table_forms({})), ContractError);
}

TEST_CASE("par admits multi-token forms, growing the phrase") {
  FormsFn forms = table_forms({{"keretanya", {{"kereta", "nya"}}}});
  auto got = par({"keretanya"}, forms);
  CHECK(got == std::set<std::vector<std::string>>{{"kereta", "nya"}});
}

TEST_CASE("par size never exceeds the option-product bound") {
  FormsFn forms = table_forms({{"ab", {{"a"}, {"b"}}}, {"cd", {{"c"}}}});
  auto got = par({"ab", "cd", "ab"}, forms);
  CHECK(got.size() <= 3 * 2 * 3 - 1);
}

TEST_CASE("phrase_paraphrase_prob on the worked example") {
  PhrasePivotCounts c = collect_phrase_counts(
      occs_from({{"abc-abc", "P"}, {"def", "P"}}));
  PhraseFormsIndex idx = index_from({{"abc", {"abc-abc"}}});
  CHECK(phrase_paraphrase_prob("abc", "abc-abc", c, idx) ==
        Catch::Approx(0.5));
}

TEST_CASE("phrase_paraphrase_prob degenerate cases") {
  PhrasePivotCounts c = collect_phrase_counts(occs_from({{"q", "E"}}));
  CHECK(phrase_paraphrase_prob("nothing", "q", c, PhraseFormsIndex{}) == 0.0);
  PhraseFormsIndex idx = index_from({{"p", {"q"}}});
  CHECK(phrase_paraphrase_prob("p", "q", c, idx) == Catch::Approx(1.0));
  CHECK_THROWS_AS(phrase_paraphrase_prob("p", "unseen", c, idx),
                  ContractError);
}

TEST_CASE("build_phrase_forms_index inverts par over the table sources") {
  FormsFn forms = table_forms({{"abc-abc", {{"abc"}}}});
  PhraseFormsIndex idx = build_phrase_forms_index(
      {"abc-abc def", "xyz"}, forms);
  REQUIRE(idx.reducible_to.count("abc def") == 1);
  CHECK(idx.reducible_to.at("abc def") ==
        std::set<std::string>{"abc-abc def"});
  CHECK(idx.reducible_to.count("xyz") == 0);
}

TEST_CASE("annotate_pivot_feature marks originals with 1") {
  PhraseTable t;
  PhraseEntry e;
  e.core = {1, 1, 1, 1, kPhrasePenalty};
  t.entries.emplace(PhraseKey{"abc-abc", "P"}, e);
  PhraseTable tp = t;
  tp.entries.emplace(PhraseKey{"abc", "P"}, e);
  tp.entries.emplace(PhraseKey{"zzz", "Q"}, e);
  PhraseTable merged = merge_tables(t, tp, 3);

  PhrasePivotCounts c = collect_phrase_counts(
      occs_from({{"abc-abc", "P"}, {"def", "P"}}));
  PhraseFormsIndex idx = index_from({{"abc", {"abc-abc"}}});
  PhraseTable out = annotate_pivot_feature(merged, c, idx, 0.5);
  CHECK(out.has_pivot);
  CHECK(out.entries.at({"abc-abc", "P"}).pivot == 1.0);      // origin BOTH
  CHECK(out.entries.at({"abc", "P"}).pivot == Catch::Approx(0.5));  // pivoted
  CHECK(out.entries.at({"zzz", "Q"}).pivot == 0.5);          // floor
}

TEST_CASE("annotate_pivot_feature requires origin marks") {
  PhraseTable unmarked;
  CHECK_THROWS_AS(
      annotate_pivot_feature(unmarked, PhrasePivotCounts{}, PhraseFormsIndex{}),
      ContractError);
}

TEST_CASE("pivot feature stays in (0, 1] on random tables") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    BitextCorpus corpus = test_support::random_corpus(rng, 10);
    std::vector<PhraseOccurrence> occs;
    for (const SentencePair& pair : corpus.pairs)
      for (PhraseOccurrence& occ : extract_phrases(pair))
        occs.push_back(std::move(occ));
    if (occs.empty()) continue;
    PhrasePivotCounts counts = collect_phrase_counts(occs);
    FormsFn forms = [](const std::string& w) {
      return test_support::synth_forms(w);
    };
    std::set<std::string> srcs;
    for (const auto& [p, n] : counts.by_malay) srcs.insert(p);
    PhraseFormsIndex idx = build_phrase_forms_index(srcs, forms);

    for (const auto& [pprime, reducers] : idx.reducible_to)
      for (const std::string& p : reducers) {
        double fast = phrase_paraphrase_prob(pprime, p, counts, idx);
        double slow = test_support::oracle_phrase_paraphrase_prob(
            occs, idx.reducible_to, pprime, p);
        CHECK(std::abs(fast - slow) < 1e-12);
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0 + 1e-12);
      }
  }
}
