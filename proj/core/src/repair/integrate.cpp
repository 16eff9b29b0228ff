#include "snipfit/repair/integrate.hpp"

#include <algorithm>

#include "snipfit/frontend/parser.hpp"

namespace snipfit::repair {
namespace {

using frontend::StmtKind;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

bool is_import_line(std::string_view line) {
  const auto t = trim(line);
  return t.substr(0, 7) == "import " && t.size() > 8 && t.back() == ';';
}

bool horizontal_ws(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::size_t line_start(std::string_view s, std::size_t pos) {
  const auto nl = pos == 0 ? std::string_view::npos : s.rfind('\n', pos - 1);
  return nl == std::string_view::npos ? 0 : nl + 1;
}

bool blank_between(std::string_view s, std::size_t a, std::size_t b) {
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(a), s.begin() + static_cast<std::ptrdiff_t>(b),
                     horizontal_ws);
}

/// Edits removing `[outer_begin, open]` and `[close, outer_end)` where `open`
/// and `close` are the wrapper's braces, swallowing lines left blank. The
/// tail edit comes first so the head offset stays valid.
std::vector<TextEdit> unwrap_edits(std::string_view body, std::size_t outer_begin, std::size_t open,
                                   std::size_t close, std::size_t outer_end) {
  std::size_t a = outer_begin;
  std::size_t b = open + 1;
  while (b < body.size() && (body[b] == ' ' || body[b] == '\t')) ++b;
  if (b < body.size() && body[b] == '\r') ++b;
  if (b < body.size() && body[b] == '\n' && blank_between(body, line_start(body, a), a)) {
    a = line_start(body, a);
    ++b;
  }
  std::size_t c = close;
  std::size_t d = outer_end;
  while (c > b && (body[c - 1] == ' ' || body[c - 1] == '\t')) --c;
  if (c == line_start(body, c)) {
    std::size_t e = d;
    while (e < body.size() && horizontal_ws(body[e])) ++e;
    if (e == body.size() || body[e] == '\n') d = e == body.size() ? e : e + 1;
  }
  std::vector<TextEdit> edits;
  edits.push_back({c, std::string(body.substr(c, d - c)), ""});
  edits.push_back({a, std::string(body.substr(a, b - a)), ""});
  return edits;
}

std::vector<const frontend::Stmt*> significant(const std::vector<frontend::StmtPtr>& stmts) {
  std::vector<const frontend::Stmt*> out;
  for (const auto& s : stmts) {
    if (s && s->kind != StmtKind::empty) out.push_back(s.get());
  }
  return out;
}

bool braces_at(std::string_view body, const frontend::Stmt& block) {
  return block.range.end > block.range.begin && block.range.end <= body.size() && body[block.range.begin] == '{' &&
         body[block.range.end - 1] == '}';
}

int line_of(std::string_view body, std::size_t offset) {
  return 1 + static_cast<int>(std::count(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Applies `p` to `c` when the error count satisfies `accept`.
template <typename Accept>
Candidate try_patch(Candidate c, PatchRecord p, const Evaluator& eval, Accept accept) {
  auto body = apply_edits(c.body, p.edits);
  auto ev = eval.evaluate(c.imports, body);
  if (!accept(ev.error_count, c.error_count)) return c;
  p.errors_before = c.error_count;
  p.errors_after = ev.error_count;
  c.body = std::move(body);
  c.diagnostics = std::move(ev.diagnostics);
  c.error_count = ev.error_count;
  c.patches.push_back(std::move(p));
  return c;
}

}  // namespace

Candidate extract_imports(Candidate c, const Evaluator& eval) {
  std::size_t pos = 0;
  int line = 1;
  while (pos < c.body.size()) {
    const auto nl = c.body.find('\n', pos);
    const auto end = nl == std::string::npos ? c.body.size() : nl + 1;
    const std::string_view text = std::string_view(c.body).substr(pos, end - pos);
    if (!is_import_line(text)) {
      pos = end;
      ++line;
      continue;
    }
    PatchRecord p;
    p.kind = PatchKind::extract_import;
    p.line = line;
    p.edits.push_back({pos, std::string(text), ""});
    std::string imp(trim(text.substr(0, text.size() - (text.back() == '\n' ? 1 : 0))));
    if (std::find(c.imports.begin(), c.imports.end(), imp) == c.imports.end()) p.import_added = imp;
    auto imports = c.imports;
    if (!p.import_added.empty()) imports.push_back(p.import_added);
    auto body = apply_edits(c.body, p.edits);
    auto ev = eval.evaluate(imports, body);
    if (ev.error_count > c.error_count) {
      pos = end;
      ++line;
      continue;
    }
    p.errors_before = c.error_count;
    p.errors_after = ev.error_count;
    c.body = std::move(body);
    c.imports = std::move(imports);
    c.diagnostics = std::move(ev.diagnostics);
    c.error_count = ev.error_count;
    c.patches.push_back(std::move(p));
  }
  return c;
}

Candidate snippetize(Candidate c, const Evaluator& eval) {
  const auto parsed = frontend::parse_statements(c.body);
  const auto stmts = significant(parsed.statements);
  if (stmts.size() != 1) return c;
  const auto& s = *stmts.front();
  PatchRecord p;
  if (s.kind == StmtKind::nested_class) {
    const auto& k = *s.klass;
    if (k.methods.size() != 1 || !k.fields.empty() || !k.classes.empty()) return c;
    const auto& m = k.methods.front();
    if (!m.body || !braces_at(c.body, *m.body) || c.body[s.range.end - 1] != '}') return c;
    p.kind = PatchKind::strip_class;
    p.edits = unwrap_edits(c.body, s.range.begin, m.body->range.begin, m.body->range.end - 1, s.range.end);
  } else if (s.kind == StmtKind::nested_method && s.method->name != "main") {
    const auto& m = *s.method;
    if (!m.body || !braces_at(c.body, *m.body)) return c;
    p.kind = PatchKind::strip_function;
    p.edits = unwrap_edits(c.body, s.range.begin, m.body->range.begin, m.body->range.end - 1, m.body->range.end);
  } else {
    return c;
  }
  p.line = line_of(c.body, s.range.begin);
  return try_patch(std::move(c), std::move(p), eval, [](int after, int before) { return after <= before; });
}

Candidate unwrap_main_in_main(Candidate c, const Evaluator& eval) {
  const auto parsed = frontend::parse_statements(c.body);
  for (const auto& s : parsed.statements) {
    if (!s || s->kind != StmtKind::nested_method || s->method->name != "main") continue;
    const auto& m = *s->method;
    if (!m.body || !braces_at(c.body, *m.body)) return c;
    PatchRecord p;
    p.kind = PatchKind::unwrap_main;
    p.line = line_of(c.body, s->range.begin);
    p.edits = unwrap_edits(c.body, s->range.begin, m.body->range.begin, m.body->range.end - 1, m.body->range.end);
    return try_patch(std::move(c), std::move(p), eval, [](int after, int before) { return after < before; });
  }
  return c;
}

}  // namespace snipfit::repair
