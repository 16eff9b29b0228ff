#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "snipfit/corpus/document.hpp"
#include "snipfit/corpus/keywords.hpp"

namespace snipfit::corpus {

inline constexpr std::string_view kIndexMagic = "SNIPFIT-IDX";
inline constexpr int kIndexFormatVersion = 1;

/// Keyword index over question titles. Immutable once built; safe to share
/// across threads for queries.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// Questions whose processed title contains every processed task keyword.
  /// Throws Error(empty_query) when no keyword survives processing.
  [[nodiscard]] std::vector<PostId> matching_questions(std::string_view task) const;

  /// Snippets from every answer of every matching question, ordered by answer
  /// score desc, answer id asc, block index asc.
  [[nodiscard]] std::vector<RawSnippet> query(std::string_view task) const;

  [[nodiscard]] std::vector<std::string> suggest_tasks(std::string_view prefix,
                                                       std::size_t limit = 10) const;

  [[nodiscard]] const KeywordOptions& options() const noexcept { return options_; }
  [[nodiscard]] const std::map<std::string, std::set<PostId>>& postings() const noexcept {
    return postings_;
  }
  [[nodiscard]] const std::map<PostId, CorpusDoc>& docs() const noexcept { return docs_; }
  [[nodiscard]] const std::vector<std::string>& task_titles() const noexcept { return task_titles_; }
  [[nodiscard]] std::size_t posting_count() const noexcept;
  [[nodiscard]] std::vector<PostId> answers_of(PostId question) const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(std::istream& in);
  static InvertedIndex load(const std::filesystem::path& path);

 private:
  friend class IndexBuilder;

  KeywordOptions options_;
  std::map<std::string, std::set<PostId>> postings_;
  std::map<PostId, CorpusDoc> docs_;
  std::map<PostId, std::vector<PostId>> answers_;  // question -> answers, ascending
  std::vector<std::string> task_titles_;
};

/// Single-writer index construction over a stream of documents.
class IndexBuilder {
 public:
  explicit IndexBuilder(KeywordOptions options);

  /// Throws Error(ingest) on a duplicate id or a question without a title.
  void add(CorpusDoc doc);
  void set_task_titles(std::vector<std::string> titles);
  /// Throws Error(ingest) when an answer references a missing question.
  [[nodiscard]] InvertedIndex finish() &&;

 private:
  InvertedIndex index_;
};

InvertedIndex build_index(const std::vector<CorpusDoc>& docs, KeywordOptions options,
                          std::vector<std::string> task_titles = bundled_task_suggestions());

}  // namespace snipfit::corpus
