#pragma once

#include <vector>

#include "snipfit/frontend/ast.hpp"
#include "snipfit/frontend/diagnostics.hpp"
#include "snipfit/frontend/registry.hpp"
#include "snipfit/frontend/source.hpp"

namespace snipfit::frontend {

/// Name resolution and simple type checking over a parsed unit.
std::vector<Diagnostic> analyze(const CompilationUnit& tree, const SourceUnit& unit,
                                const TypeRegistry& registry = TypeRegistry::standard());

struct CompileResult {
  std::vector<Diagnostic> diagnostics;
  int error_count = 0;
};

/// Parse + analyze entirely in memory. Diagnostics are ordered by start
/// offset; ties keep parser diagnostics first.
CompileResult check(const SourceUnit& unit, const TypeRegistry& registry = TypeRegistry::standard());

}  // namespace snipfit::frontend
