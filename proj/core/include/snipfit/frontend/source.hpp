#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace snipfit::frontend {

enum class Origin { user_file, snippet, spliced };

/// 1-based line and column.
struct Position {
  int line = 1;
  int col = 1;

  friend bool operator==(const Position&, const Position&) = default;
};

class SourceUnit {
 public:
  SourceUnit() : SourceUnit(std::string{}, Origin::snippet) {}
  explicit SourceUnit(std::string text, Origin origin = Origin::snippet);

  [[nodiscard]] const std::string& text() const noexcept { return text_; }
  [[nodiscard]] Origin origin() const noexcept { return origin_; }
  /// Byte offsets at which each line starts; the first entry is always 0.
  [[nodiscard]] const std::vector<std::size_t>& line_map() const noexcept { return line_starts_; }
  [[nodiscard]] int line_count() const noexcept { return static_cast<int>(line_starts_.size()); }

  [[nodiscard]] Position position_of(std::size_t offset) const;
  /// Columns past the end of the line clamp to the line end.
  [[nodiscard]] std::size_t offset_of(Position pos) const;
  [[nodiscard]] std::string_view line_text(int line) const;

 private:
  std::string text_;
  Origin origin_;
  std::vector<std::size_t> line_starts_;
};

}  // namespace snipfit::frontend
