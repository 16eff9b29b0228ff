#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace snipfit::corpus {

enum class KeywordMode { none, stem, lemma };

std::string_view to_string(KeywordMode mode) noexcept;
/// Throws snipfit::Error(invalid_argument) for unknown names.
KeywordMode parse_keyword_mode(std::string_view name);

struct KeywordOptions {
  KeywordMode mode = KeywordMode::lemma;
  bool omit_stop = true;

  friend bool operator==(const KeywordOptions&, const KeywordOptions&) = default;
};

struct Keyword {
  std::string surface;
  std::string processed;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

/// Lowercased word tokens: runs of [a-z0-9_'], apostrophes trimmed at the ends.
std::vector<std::string> tokenize(std::string_view text);

/// Normalizes task and title text into index keywords.
///
/// The processed form of a token is a pure function of the token and the mode,
/// and stop-word filtering is decided on the processed form. That keeps the
/// partition of tokens coarser as the mode goes none -> stem -> lemma, which is
/// what makes retrieval monotone under intersection matching.
class KeywordProcessor {
 public:
  explicit KeywordProcessor(KeywordOptions options);
  KeywordProcessor(KeywordOptions options, const std::vector<std::string>& stop_words,
                   const std::vector<std::pair<std::string, std::string>>& lemma_pairs);

  [[nodiscard]] std::vector<Keyword> process(std::string_view text) const;
  /// Mode-dependent normal form of one lowercase token (no filtering).
  [[nodiscard]] std::string normalize(std::string_view token) const;
  [[nodiscard]] bool is_filtered(std::string_view processed) const;
  [[nodiscard]] const KeywordOptions& options() const noexcept { return options_; }

  /// Shared processor for a configuration, built from the bundled word lists.
  static const KeywordProcessor& shared(KeywordOptions options);

 private:
  KeywordOptions options_;
  std::unordered_map<std::string, std::string> lemma_;  // stem -> stem
  std::unordered_set<std::string> filtered_;            // processed forms of stop words
};

std::vector<Keyword> process_keywords(std::string_view text, KeywordMode mode, bool omit_stop);

/// Porter stemming iterated to a fixed point.
std::string stem_fixed(std::string_view word);

std::vector<std::string> bundled_stop_words();
std::vector<std::pair<std::string, std::string>> bundled_lemma_pairs();
std::vector<std::string> bundled_task_suggestions();

std::vector<std::string> parse_word_list(std::string_view text);
std::vector<std::pair<std::string, std::string>> parse_pair_list(std::string_view text);

}  // namespace snipfit::corpus
