#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "snipfit/corpus/document.hpp"
#include "snipfit/frontend/diagnostics.hpp"

namespace snipfit::repair {

enum class Stage { retrieved = 0, integrated = 1, fixed = 2, deleted = 3 };
inline constexpr int kStageCount = 4;

std::string_view to_string(Stage s) noexcept;

enum class PatchKind {
  extract_import,
  strip_class,
  strip_function,
  unwrap_main,
  insert_token,
  add_import,
  declare_var,
  delete_token,
  delete_line,
};

std::string_view to_string(PatchKind k) noexcept;

/// Replace `removed` at byte `offset` of the body with `inserted`.
struct TextEdit {
  std::size_t offset = 0;
  std::string removed;
  std::string inserted;

  friend bool operator==(const TextEdit&, const TextEdit&) = default;
};

/// One accepted change. Edits apply in order to the body as it stood before
/// the patch; `import_added` / `import_removed` update the import list.
struct PatchRecord {
  PatchKind kind = PatchKind::insert_token;
  int line = 0;  // 1-based body line the patch targets (0 when not line-bound)
  std::vector<TextEdit> edits;
  std::string import_added;
  std::string import_removed;
  int errors_before = 0;
  int errors_after = 0;

  friend bool operator==(const PatchRecord&, const PatchRecord&) = default;
};

/// Applies `edits` in order; throws Error(invalid_argument) when an edit's
/// `removed` text is not found at its offset.
std::string apply_edits(std::string body, const std::vector<TextEdit>& edits);

struct Replayed {
  std::string body;
  std::vector<std::string> imports;
};

/// Re-applies `patches` to a freshly retrieved snippet text.
Replayed replay(std::string_view original, const std::vector<PatchRecord>& patches);

struct Candidate {
  std::string id;  // "<answer id>:<block index>"
  corpus::PostId source_answer = 0;
  corpus::PostId question_id = 0;
  int block_index = 0;
  int answer_score = 0;
  int retrieval_rank = 0;
  std::string original;  // retrieved text

  std::string body;
  std::vector<std::string> imports;  // full lines, e.g. "import java.util.List;"
  int error_count = 0;
  std::vector<frontend::Diagnostic> diagnostics;  // spliced-unit coordinates
  std::vector<PatchRecord> patches;
  Stage stage = Stage::retrieved;
  std::array<int, kStageCount> stage_errors{};  // error count on leaving each stage
  std::vector<int> deleted_lines;  // 0-based indices into the body entering deletion
  bool degenerate = false;         // no non-blank line left

  static Candidate from_snippet(const corpus::RawSnippet& s, int retrieval_rank);
};

/// True when `body` has no non-blank line.
bool is_blank_body(std::string_view body);

nlohmann::json to_json(const TextEdit& e);
nlohmann::json to_json(const PatchRecord& p);
nlohmann::json to_json(const Candidate& c);

}  // namespace snipfit::repair
