#include "snipfit/pipeline/splice.hpp"

#include <algorithm>

#include "snipfit/error.hpp"

namespace snipfit::pipeline {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::size_t leading_ws(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

bool is_import_line(std::string_view s) {
  s.remove_prefix(leading_ws(s));
  return s.substr(0, 7) == "import ";
}

}  // namespace

std::optional<std::size_t> Spliced::body_offset_of(std::size_t unit_offset) const {
  if (unit_offset < body_offset || unit_offset >= body_offset + body_length) return std::nullopt;
  const auto pos = unit.position_of(unit_offset);
  const auto k = static_cast<std::size_t>(pos.line - body_first_line);
  if (k >= dedent.size()) return std::nullopt;
  const auto col0 = static_cast<std::size_t>(pos.col - 1);
  const std::size_t base = body_line_starts[k] + dedent[k];
  const auto emitted = unit.line_text(pos.line);
  if (emitted.empty() || col0 < indent) return base;
  return base + (col0 - indent);
}

Spliced splice(const frontend::SourceUnit& context, Cursor cursor, const std::vector<std::string>& imports,
               std::string_view body) {
  if (cursor.line < 1 || cursor.line > context.line_count() || cursor.col < 1 ||
      static_cast<std::size_t>(cursor.col) > context.line_text(cursor.line).size() + 1) {
    throw Error(ErrorKind::invalid_argument, "cursor " + std::to_string(cursor.line) + ":" +
                                                 std::to_string(cursor.col) + " is outside the file");
  }
  const std::string& text = context.text();
  Spliced s;

  // Hoisted imports.
  std::string import_block;
  std::size_t import_pos = 0;
  if (!imports.empty()) {
    int last_import = 0;
    for (int l = 1; l <= context.line_count(); ++l) {
      if (is_import_line(context.line_text(l))) last_import = l;
    }
    if (last_import > 0) {
      if (last_import < context.line_count()) {
        import_pos = context.line_map()[static_cast<std::size_t>(last_import)];
      } else {
        import_pos = text.size();
        import_block += '\n';
      }
      for (const auto& imp : imports) import_block += imp + "\n";
    } else {
      for (const auto& imp : imports) import_block += imp + "\n";
      import_block += '\n';
    }
  }

  // Body lines, dedented then re-indented to the cursor column.
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < body.size();) {
    const auto nl = body.find('\n', start);
    const auto end = nl == std::string_view::npos ? body.size() : nl;
    s.body_line_starts.push_back(start);
    lines.push_back(body.substr(start, end - start));
    start = nl == std::string_view::npos ? body.size() : nl + 1;
  }
  std::size_t common = std::string_view::npos;
  for (auto line : lines) {
    if (!is_blank(line)) common = std::min(common, leading_ws(line));
  }
  if (common == std::string_view::npos) common = 0;
  s.indent = static_cast<std::size_t>(cursor.col - 1);
  std::string body_block;
  for (auto line : lines) {
    if (is_blank(line)) {
      s.dedent.push_back(line.size());
      body_block += '\n';
      continue;
    }
    s.dedent.push_back(common);
    body_block.append(s.indent, ' ');
    auto rest = line.substr(common);
    if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
    body_block += rest;
    body_block += '\n';
  }
  const std::size_t body_pos = context.line_map()[static_cast<std::size_t>(cursor.line - 1)];

  std::string out = text;
  if (import_pos <= body_pos) {
    out.insert(body_pos, body_block);
    out.insert(import_pos, import_block);
    s.import_offset = import_pos;
    s.body_offset = body_pos + import_block.size();
  } else {
    out.insert(import_pos, import_block);
    out.insert(body_pos, body_block);
    s.import_offset = import_pos + body_block.size();
    s.body_offset = body_pos;
  }
  s.import_length = import_block.size();
  s.body_length = body_block.size();
  s.unit = frontend::SourceUnit(std::move(out), frontend::Origin::spliced);
  s.body_first_line = s.unit.position_of(s.body_offset).line;
  return s;
}

std::string unsplice(const Spliced& s) {
  std::string out = s.unit.text();
  if (s.import_offset > s.body_offset) {
    out.erase(s.import_offset, s.import_length);
    out.erase(s.body_offset, s.body_length);
  } else {
    out.erase(s.body_offset, s.body_length);
    out.erase(s.import_offset, s.import_length);
  }
  return out;
}

const frontend::SourceUnit& harness_context() {
  static const frontend::SourceUnit unit(
      "public class Main {\n    public static void main(String[] args) {\n        \n    }\n}\n",
      frontend::Origin::user_file);
  return unit;
}

Cursor harness_cursor() noexcept { return Cursor{3, 9}; }

}  // namespace snipfit::pipeline
