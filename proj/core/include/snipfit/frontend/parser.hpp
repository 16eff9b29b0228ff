#pragma once

#include <vector>

#include "snipfit/frontend/ast.hpp"
#include "snipfit/frontend/diagnostics.hpp"
#include "snipfit/frontend/source.hpp"

namespace snipfit::frontend {

struct ParseResult {
  CompilationUnit tree;
  std::vector<Diagnostic> diagnostics;
};

/// Error-recovering parse of a compilation unit. Always returns a tree; every
/// error node in it is accompanied by at least one diagnostic.
ParseResult parse(const SourceUnit& unit);

/// Parses `text` as a statement sequence (the body of a method). Ranges in
/// the returned statements are offsets into `text`.
struct StatementsResult {
  std::vector<StmtPtr> statements;
  std::vector<Diagnostic> diagnostics;
};
StatementsResult parse_statements(std::string_view text);

}  // namespace snipfit::frontend
