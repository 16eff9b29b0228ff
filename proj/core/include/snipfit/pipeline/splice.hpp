#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snipfit/frontend/source.hpp"

namespace snipfit::pipeline {

/// 1-based insertion point in a user file. The body is inserted as whole
/// lines before `line`, indented to `col`.
struct Cursor {
  int line = 1;
  int col = 1;

  friend bool operator==(const Cursor&, const Cursor&) = default;
};

/// A snippet spliced into a context file, with enough layout to map unit
/// positions back to snippet-body offsets and to recover the context.
struct Spliced {
  frontend::SourceUnit unit;
  std::size_t import_offset = 0;  // byte offset of the hoisted import block
  std::size_t import_length = 0;  // bytes, including a separating blank line
  int body_first_line = 0;        // unit line of the first body line
  std::size_t body_offset = 0;    // byte offset of the inserted body block
  std::size_t body_length = 0;
  std::size_t indent = 0;                  // spaces added in front of body lines
  std::vector<std::size_t> dedent;         // leading bytes stripped per body line
  std::vector<std::size_t> body_line_starts;  // offsets of lines in the original body

  /// Byte offset into the original body for a unit offset inside the inserted
  /// body block; nullopt for positions in the context or import block.
  [[nodiscard]] std::optional<std::size_t> body_offset_of(std::size_t unit_offset) const;
  /// True when `unit_offset` falls inside the hoisted import block.
  [[nodiscard]] bool in_imports(std::size_t unit_offset) const noexcept {
    return unit_offset >= import_offset && unit_offset < import_offset + import_length;
  }
  [[nodiscard]] int body_line_count() const noexcept { return static_cast<int>(dedent.size()); }
};

/// Hoists `imports` (full lines such as "import java.util.List;") below the
/// last import of `context` (or to the top, followed by a blank line) and
/// inserts `body`, dedented to its common indentation and re-indented to the
/// cursor column. Throws Error(invalid_argument) for a cursor outside the file.
Spliced splice(const frontend::SourceUnit& context, Cursor cursor, const std::vector<std::string>& imports,
               std::string_view body);

/// Removes the spliced regions, returning the original context text.
std::string unsplice(const Spliced& s);

/// Empty class and main method used to measure snippets in isolation.
const frontend::SourceUnit& harness_context();
Cursor harness_cursor() noexcept;

}  // namespace snipfit::pipeline
