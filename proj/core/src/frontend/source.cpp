#include "snipfit/frontend/source.hpp"

#include <algorithm>

namespace snipfit::frontend {

SourceUnit::SourceUnit(std::string text, Origin origin) : text_(std::move(text)), origin_(origin) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] == '\n') line_starts_.push_back(i + 1);
  }
}

Position SourceUnit::position_of(std::size_t offset) const {
  offset = std::min(offset, text_.size());
  const auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const auto line = static_cast<int>(it - line_starts_.begin());
  return Position{line, static_cast<int>(offset - line_starts_[static_cast<std::size_t>(line - 1)]) + 1};
}

std::size_t SourceUnit::offset_of(Position pos) const {
  const int line = std::clamp(pos.line, 1, line_count());
  const std::size_t start = line_starts_[static_cast<std::size_t>(line - 1)];
  const std::size_t len = line_text(line).size();
  const auto col = static_cast<std::size_t>(std::max(pos.col, 1) - 1);
  return start + std::min(col, len);
}

std::string_view SourceUnit::line_text(int line) const {
  if (line < 1 || line > line_count()) return {};
  const std::size_t start = line_starts_[static_cast<std::size_t>(line - 1)];
  std::size_t end = line < line_count() ? line_starts_[static_cast<std::size_t>(line)] - 1 : text_.size();
  return std::string_view(text_).substr(start, end - start);
}

}  // namespace snipfit::frontend
