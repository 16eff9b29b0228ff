#include "snipfit/repair/fixes.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "snipfit/pipeline/splice.hpp"

namespace snipfit::repair {
namespace {

using frontend::DiagCode;
using frontend::Diagnostic;

int line_of(std::string_view body, std::size_t offset) {
  offset = std::min(offset, body.size());
  return 1 + static_cast<int>(std::count(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

pipeline::Spliced layout(const Candidate& c, const Evaluator& eval) {
  return pipeline::splice(eval.context(), eval.cursor(), c.imports, c.body);
}

/// Applies `p` to a copy of `c` and recompiles it; the caller decides.
Candidate trial(const Candidate& c, PatchRecord p, const Evaluator& eval) {
  Candidate t = c;
  t.body = apply_edits(t.body, p.edits);
  if (!p.import_removed.empty()) {
    const auto it = std::find(t.imports.begin(), t.imports.end(), p.import_removed);
    if (it != t.imports.end()) t.imports.erase(it);
  }
  if (!p.import_added.empty()) t.imports.push_back(p.import_added);
  eval.refresh(t);
  p.errors_before = c.error_count;
  p.errors_after = t.error_count;
  t.patches.push_back(std::move(p));
  return t;
}

/// Offset just past the last non-whitespace byte of the body.
std::size_t content_end(std::string_view body) {
  std::size_t e = body.size();
  while (e > 0 && (body[e - 1] == ' ' || body[e - 1] == '\t' || body[e - 1] == '\n' || body[e - 1] == '\r')) --e;
  return e;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '$')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '$'; });
}

std::optional<Candidate> remove_import(const Candidate& c, const Diagnostic& d, const Evaluator& eval) {
  const auto s = layout(c, eval);
  if (!s.in_imports(d.begin)) return std::nullopt;
  std::string line(s.unit.line_text(s.unit.position_of(d.begin).line));
  while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
  if (std::find(c.imports.begin(), c.imports.end(), line) == c.imports.end()) return std::nullopt;
  PatchRecord p;
  p.kind = PatchKind::delete_token;
  p.import_removed = line;
  return trial(c, std::move(p), eval);
}

/// Keeps the first trial with the fewest errors.
std::optional<Candidate> best_of(std::optional<Candidate> best, Candidate t) {
  if (!best || t.error_count < best->error_count) return t;
  return best;
}

}  // namespace

std::string default_initializer(std::string_view type) {
  if (type.size() > 2 && type.substr(type.size() - 2) == "[]") {
    auto elem = type.substr(0, type.size() - 2);
    std::string extra;
    while (elem.size() > 2 && elem.substr(elem.size() - 2) == "[]") {
      elem.remove_suffix(2);
      extra += "[]";
    }
    return "new " + std::string(elem) + "[0]" + extra;
  }
  if (type == "String") return "\"empty\"";
  if (type == "int" || type == "short" || type == "byte") return "0";
  if (type == "long") return "0L";
  if (type == "double") return "0.0";
  if (type == "float") return "0.0f";
  if (type == "boolean") return "false";
  if (type == "char") return "'a'";
  return "null";
}

std::optional<Candidate> fix_missing_token(const Candidate& c, const Diagnostic& d, const Evaluator& eval) {
  const auto s = layout(c, eval);
  std::size_t at = 0;
  if (const auto off = s.body_offset_of(d.begin)) {
    at = *off;
  } else if (d.begin >= s.body_offset + s.body_length && s.body_length > 0) {
    at = content_end(c.body);
  } else {
    return std::nullopt;
  }
  std::vector<std::string> tokens;
  if (d.hint && !d.hint->empty()) {
    tokens.push_back(*d.hint);
  } else {
    tokens = {";", "}"};
  }
  std::optional<Candidate> best;
  for (const auto& tok : tokens) {
    PatchRecord p;
    p.kind = PatchKind::insert_token;
    p.line = line_of(c.body, at);
    p.edits.push_back({at, "", tok});
    best = best_of(std::move(best), trial(c, std::move(p), eval));
  }
  return best;
}

std::optional<Candidate> fix_import(const Candidate& c, const Diagnostic& d, const Evaluator& eval) {
  if (!d.hint) return std::nullopt;
  const auto& entries = eval.registry().lookup(*d.hint);
  std::optional<Candidate> best;
  for (const auto& e : entries) {
    const auto imp = "import " + e.qualified(*d.hint) + ";";
    if (std::find(c.imports.begin(), c.imports.end(), imp) != c.imports.end()) continue;
    PatchRecord p;
    p.kind = PatchKind::add_import;
    p.import_added = imp;
    best = best_of(std::move(best), trial(c, std::move(p), eval));
    if (best->error_count < c.error_count) break;  // standard library entries come first
  }
  return best;
}

std::optional<Candidate> fix_undeclared_variable(const Candidate& c, const Diagnostic& d, const Evaluator& eval) {
  if (!d.hint || !is_identifier(*d.hint)) return std::nullopt;
  std::vector<std::string> types;
  if (d.inferred_type && d.inferred_type->find('?') == std::string::npos && *d.inferred_type != "null") {
    types.push_back(*d.inferred_type);
  } else {
    types.assign(kBruteForceTypes.begin(), kBruteForceTypes.end());
  }
  // Insert above the first non-blank line, matching its indentation.
  std::size_t at = 0;
  while (at < c.body.size()) {
    const auto nl = c.body.find('\n', at);
    const auto end = nl == std::string::npos ? c.body.size() : nl;
    const auto line = std::string_view(c.body).substr(at, end - at);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) break;
    at = nl == std::string::npos ? c.body.size() : nl + 1;
  }
  std::string indent;
  while (at + indent.size() < c.body.size() && (c.body[at + indent.size()] == ' ' || c.body[at + indent.size()] == '\t')) {
    indent += c.body[at + indent.size()];
  }
  const bool at_end = at >= c.body.size();
  std::optional<Candidate> best;
  for (const auto& t : types) {
    PatchRecord p;
    p.kind = PatchKind::declare_var;
    p.line = line_of(c.body, at);
    std::string decl = indent + t + " " + *d.hint + " = " + default_initializer(t) + ";";
    p.edits.push_back({at, "", at_end ? (c.body.empty() || c.body.back() == '\n' ? decl + "\n" : "\n" + decl)
                                      : decl + "\n"});
    best = best_of(std::move(best), trial(c, std::move(p), eval));
  }
  if (best && best->error_count >= c.error_count) return std::nullopt;
  return best;
}

std::optional<Candidate> delete_error_token(const Candidate& c, const Diagnostic& d, const Evaluator& eval) {
  if (d.end <= d.begin) return std::nullopt;
  const auto s = layout(c, eval);
  const auto b = s.body_offset_of(d.begin);
  const auto e = s.body_offset_of(d.end - 1);
  if (!b || !e || *e < *b) return std::nullopt;
  const auto removed = c.body.substr(*b, *e + 1 - *b);
  if (removed.find('\n') != std::string::npos) return std::nullopt;
  PatchRecord p;
  p.kind = PatchKind::delete_token;
  p.line = line_of(c.body, *b);
  p.edits.push_back({*b, removed, ""});
  return trial(c, std::move(p), eval);
}

Candidate targeted_fix_pass(Candidate c, const Evaluator& eval) {
  using Key = std::tuple<int, std::string, std::string, int, int>;
  std::set<Key> processed;
  eval.refresh(c);
  // Each accepted fix removes at least one error; the cap guards against
  // key churn when a rejected fix's line keeps changing.
  const std::size_t max_attempts = 64 + 16 * static_cast<std::size_t>(c.error_count);
  for (std::size_t attempts = 0; c.error_count > 0 && attempts < max_attempts; ++attempts) {
    const auto s = layout(c, eval);
    const Diagnostic* next = nullptr;
    Key next_key;
    std::set<Key> seen;
    for (const auto& d : c.diagnostics) {
      Key k{static_cast<int>(d.code), d.hint.value_or(d.token.value_or("")),
            std::string(s.unit.line_text(d.span.start_line)), d.span.start_col, 0};
      while (seen.count(k)) ++std::get<4>(k);
      seen.insert(k);
      if (!processed.count(k)) {
        next = &d;
        next_key = k;
        break;
      }
    }
    if (!next) break;
    processed.insert(next_key);
    const Diagnostic d = *next;

    std::optional<Candidate> t;
    switch (d.code) {
      case DiagCode::missing_token: t = fix_missing_token(c, d, eval); break;
      case DiagCode::unresolved_type: t = fix_import(c, d, eval); break;
      case DiagCode::unresolved:
        if (s.in_imports(d.begin)) {
          t = remove_import(c, d, eval);
        } else if (d.hint && !eval.registry().lookup(*d.hint).empty()) {
          t = fix_import(c, d, eval);
        } else {
          t = fix_undeclared_variable(c, d, eval);
        }
        break;
      case DiagCode::undeclared_var: t = fix_undeclared_variable(c, d, eval); break;
      case DiagCode::unexpected_token:
      case DiagCode::parse: t = delete_error_token(c, d, eval); break;
      default: break;
    }
    if (t && t->error_count < c.error_count) c = std::move(*t);
  }
  return c;
}

}  // namespace snipfit::repair
