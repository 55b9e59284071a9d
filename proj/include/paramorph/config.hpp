#pragma once

// JSON configuration file loading: rule inventory, vocabulary file, feature
// arities, floors, EM iterations, decoder weights.  Every field is optional;
// command-line flags override file values.

#include <fstream>
#include <string>

#include <json.hpp>

#include "paramorph/error.hpp"
#include "paramorph/pipeline.hpp"

namespace paramorph {

inline void apply_rule_config_json(const nlohmann::json& j, RuleConfig& cfg) {
  if (j.contains("prefixes"))
    cfg.prefixes = j["prefixes"].get<std::vector<std::string>>();
  if (j.contains("suffixes"))
    cfg.suffixes = j["suffixes"].get<std::vector<std::string>>();
  if (j.contains("circumfixes")) {
    cfg.circumfixes.clear();
    for (const auto& c : j["circumfixes"]) {
      if (!c.is_array() || c.size() != 2)
        throw DataError("config: circumfix entries must be [pre, suf] pairs");
      cfg.circumfixes.push_back({c[0].get<std::string>(),
                                 c[1].get<std::string>()});
    }
  }
  if (j.contains("enclitics"))
    cfg.enclitics = j["enclitics"].get<std::vector<std::string>>();
  if (j.contains("proclitics"))
    cfg.proclitics = j["proclitics"].get<std::vector<std::string>>();
  if (j.contains("nasal_replacements")) {
    cfg.nasal_replacements.clear();
    for (const auto& [k, v] : j["nasal_replacements"].items())
      cfg.nasal_replacements[k] = v.get<std::vector<std::string>>();
  }
  if (j.contains("min_stem_length"))
    cfg.min_stem_length = j["min_stem_length"].get<std::size_t>();
  if (j.contains("lcs_threshold")) {
    const auto& t = j["lcs_threshold"];
    if (!t.is_array() || t.size() != 2)
      throw DataError("config: lcs_threshold must be [numerator, denominator]");
    cfg.lcs_threshold = Ratio{t[0].get<long>(), t[1].get<long>()};
    if (cfg.lcs_threshold.den <= 0 || cfg.lcs_threshold.num <= 0 ||
        cfg.lcs_threshold.num > cfg.lcs_threshold.den)
      throw DataError("config: lcs_threshold must lie in (0, 1]");
  }
  if (j.contains("closure_depth"))
    cfg.closure_depth = j["closure_depth"].get<int>();
  if (j.contains("compound_split"))
    cfg.compound_split = j["compound_split"].get<bool>();
  if (j.contains("emit_segmented_compound"))
    cfg.emit_segmented_compound = j["emit_segmented_compound"].get<bool>();
  if (j.contains("min_compound_part"))
    cfg.min_compound_part = j["min_compound_part"].get<std::size_t>();
  if (j.contains("vocab_file"))
    cfg.vocab = load_vocab(j["vocab_file"].get<std::string>());
  if (cfg.min_stem_length < 2)
    throw DataError("config: min_stem_length must be >= 2");
}

inline void apply_pipeline_config_json(const nlohmann::json& j,
                                       PipelineOptions& opts) {
  if (j.contains("rules")) apply_rule_config_json(j["rules"], opts.rules);
  if (j.contains("em_iterations"))
    opts.em_iterations = j["em_iterations"].get<int>();
  if (j.contains("num_indicators"))
    opts.num_indicators = j["num_indicators"].get<int>();
  if (j.contains("max_phrase_len"))
    opts.max_phrase_len = j["max_phrase_len"].get<int>();
  if (j.contains("pivot_floor"))
    opts.pivot_floor = j["pivot_floor"].get<double>();
  if (j.contains("weights"))
    opts.weights = j["weights"].get<std::vector<double>>();
  if (j.contains("preset"))
    opts.preset = parse_preset(j["preset"].get<std::string>());
}

inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config parse error in " + path + ": " + e.what());
  }
}

}  // namespace paramorph
