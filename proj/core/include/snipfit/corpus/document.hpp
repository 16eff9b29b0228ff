#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace snipfit::corpus {

using PostId = std::int64_t;

enum class DocKind { question, answer };

/// One Q&A post. Code blocks live in `body`, fenced with triple backticks.
struct CorpusDoc {
  PostId id = 0;
  DocKind kind = DocKind::question;
  std::optional<PostId> parent_id;  // answers only
  std::string title;                // questions only
  std::string body;
  int score = 0;
  std::vector<std::string> tags;

  friend bool operator==(const CorpusDoc&, const CorpusDoc&) = default;
};

struct RawSnippet {
  PostId source_answer = 0;
  PostId question_id = 0;
  int block_index = 0;
  std::string text;
  int answer_score = 0;

  friend bool operator==(const RawSnippet&, const RawSnippet&) = default;
};

/// One snippet per non-blank fenced block, in document order. Non-answers yield
/// nothing. An unterminated fence runs to the end of the body.
std::vector<RawSnippet> extract_snippets(const CorpusDoc& doc);

nlohmann::json to_json(const CorpusDoc& doc);
/// Throws snipfit::Error(format) on missing or mistyped fields.
CorpusDoc doc_from_json(const nlohmann::json& j);

/// JSON-lines reader; blank lines are skipped. Errors name the 1-based line.
std::vector<CorpusDoc> read_corpus(std::istream& in);
std::vector<CorpusDoc> load_corpus(const std::filesystem::path& path);

}  // namespace snipfit::corpus
