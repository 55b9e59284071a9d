#pragma once

// Tokenized parallel text with optional word alignments, plus the plain-text
// file formats used throughout the pipeline: one sentence per line, tokens
// space-separated, alignment files with zero-indexed "i-j" links.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "paramorph/error.hpp"

namespace paramorph {

struct Sentence {
  std::vector<std::string> tokens;

  bool operator==(const Sentence&) const = default;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }
};

using AlignmentLink = std::pair<int, int>;  // (source index, target index)
using Alignment = std::set<AlignmentLink>;

struct SentencePair {
  Sentence source;  // Malay side
  Sentence target;  // English side
  std::optional<Alignment> alignment;

  bool operator==(const SentencePair&) const = default;
};

struct BitextCorpus {
  std::vector<SentencePair> pairs;

  bool operator==(const BitextCorpus&) const = default;

  bool aligned() const {
    return !pairs.empty() && pairs.front().alignment.has_value();
  }
};

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

// Parses one pre-tokenized line.  Lowercases; rejects empty lines.
inline Sentence parse_sentence(const std::string& line, std::size_t lineno,
                               const std::string& path) {
  Sentence s{detail::split_ws(detail::lowercase(line))};
  if (s.tokens.empty())
    throw DataError(path + ":" + std::to_string(lineno) +
                    ": empty line (corpus corruption?)");
  return s;
}

// Parses one alignment line of "i-j" links (zero-indexed, source first).
inline Alignment parse_alignment(const std::string& line, std::size_t lineno,
                                 const std::string& path, std::size_t src_len,
                                 std::size_t tgt_len) {
  Alignment a;
  for (const std::string& tok : detail::split_ws(line)) {
    auto dash = tok.find('-');
    std::size_t used_i = 0, used_j = 0;
    int i = -1, j = -1;
    try {
      if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
        throw std::invalid_argument(tok);
      i = std::stoi(tok.substr(0, dash), &used_i);
      j = std::stoi(tok.substr(dash + 1), &used_j);
      if (used_i != dash || used_j != tok.size() - dash - 1 || i < 0 || j < 0)
        throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": malformed alignment token '" + tok + "'");
    }
    if (i >= static_cast<int>(src_len) || j >= static_cast<int>(tgt_len))
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": alignment link " + tok + " out of range for " +
                      std::to_string(src_len) + "x" + std::to_string(tgt_len) +
                      " sentence pair");
    a.emplace(i, j);
  }
  return a;
}

inline BitextCorpus read_bitext(const std::string& source_path,
                                const std::string& target_path,
                                const std::optional<std::string>& alignment_path =
                                    std::nullopt) {
  auto src_lines = detail::read_lines(source_path);
  auto tgt_lines = detail::read_lines(target_path);
  if (src_lines.size() != tgt_lines.size())
    throw DataError("line-count mismatch: " + source_path + " has " +
                    std::to_string(src_lines.size()) + " lines, " +
                    target_path + " has " + std::to_string(tgt_lines.size()));
  std::vector<std::string> aln_lines;
  if (alignment_path) {
    aln_lines = detail::read_lines(*alignment_path);
    if (aln_lines.size() != src_lines.size())
      throw DataError("line-count mismatch: " + source_path + " has " +
                      std::to_string(src_lines.size()) + " lines, " +
                      *alignment_path + " has " +
                      std::to_string(aln_lines.size()));
  }

  BitextCorpus corpus;
  corpus.pairs.reserve(src_lines.size());
  for (std::size_t n = 0; n < src_lines.size(); ++n) {
    SentencePair pair;
    pair.source = parse_sentence(src_lines[n], n + 1, source_path);
    pair.target = parse_sentence(tgt_lines[n], n + 1, target_path);
    if (alignment_path)
      pair.alignment =
          parse_alignment(aln_lines[n], n + 1, *alignment_path,
                          pair.source.tokens.size(), pair.target.tokens.size());
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

inline std::string format_alignment(const Alignment& a) {
  std::string out;
  for (const auto& [i, j] : a) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i) + "-" + std::to_string(j);
  }
  return out;
}

inline void write_bitext(const BitextCorpus& corpus,
                         const std::string& source_path,
                         const std::string& target_path,
                         const std::optional<std::string>& alignment_path =
                             std::nullopt) {
  if (alignment_path && !corpus.pairs.empty() && !corpus.aligned())
    throw ContractError(
        "alignment output requested but the corpus carries no alignments");
  std::ofstream src(source_path, std::ios::binary);
  std::ofstream tgt(target_path, std::ios::binary);
  if (!src) throw IoError("cannot write file: " + source_path);
  if (!tgt) throw IoError("cannot write file: " + target_path);
  std::ofstream aln;
  if (alignment_path) {
    aln.open(*alignment_path, std::ios::binary);
    if (!aln) throw IoError("cannot write file: " + *alignment_path);
  }
  for (const SentencePair& pair : corpus.pairs) {
    src << pair.source.str() << '\n';
    tgt << pair.target.str() << '\n';
    if (alignment_path) aln << format_alignment(*pair.alignment) << '\n';
  }
}

// Validates the corpus invariants the parser enforces; useful for corpora
// built in memory.
inline void validate_corpus(const BitextCorpus& corpus) {
  bool any_aligned = false, any_unaligned = false;
  for (const SentencePair& pair : corpus.pairs) {
    if (pair.source.tokens.empty() || pair.target.tokens.empty())
      throw DataError("empty sentence in corpus");
    if (pair.alignment) {
      any_aligned = true;
      for (const auto& [i, j] : *pair.alignment)
        if (i < 0 || j < 0 || i >= static_cast<int>(pair.source.tokens.size()) ||
            j >= static_cast<int>(pair.target.tokens.size()))
          throw DataError("alignment link out of range");
    } else {
      any_unaligned = true;
    }
  }
  if (any_aligned && any_unaligned)
    throw DataError("mixed corpus: some pairs aligned, some not");
}

inline BitextCorpus swap_sides(const BitextCorpus& corpus) {
  BitextCorpus out;
  out.pairs.reserve(corpus.pairs.size());
  for (const SentencePair& pair : corpus.pairs) {
    SentencePair sw;
    sw.source = pair.target;
    sw.target = pair.source;
    if (pair.alignment) {
      Alignment a;
      for (const auto& [i, j] : *pair.alignment) a.emplace(j, i);
      sw.alignment = std::move(a);
    }
    out.pairs.push_back(std::move(sw));
  }
  return out;
}

}  // namespace paramorph
