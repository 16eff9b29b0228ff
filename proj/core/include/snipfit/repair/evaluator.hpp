#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "snipfit/frontend/analyzer.hpp"
#include "snipfit/frontend/registry.hpp"
#include "snipfit/frontend/source.hpp"
#include "snipfit/pipeline/splice.hpp"
#include "snipfit/repair/candidate.hpp"

namespace snipfit::repair {

struct Evaluation {
  pipeline::Spliced spliced;
  std::vector<frontend::Diagnostic> diagnostics;
  int error_count = 0;
};

/// Compiles snippet bodies spliced into a fixed context. Every trial in the
/// repair cascade goes through here, entirely in memory.
class Evaluator {
 public:
  Evaluator(frontend::SourceUnit context, pipeline::Cursor cursor,
            const frontend::TypeRegistry& registry = frontend::TypeRegistry::standard());

  /// Splices into the empty class + main harness.
  static Evaluator harness(const frontend::TypeRegistry& registry = frontend::TypeRegistry::standard());

  [[nodiscard]] Evaluation evaluate(const std::vector<std::string>& imports, std::string_view body) const;
  [[nodiscard]] int error_count(const std::vector<std::string>& imports, std::string_view body) const;
  /// Re-evaluates `c` and stores its diagnostics and error count.
  void refresh(Candidate& c) const;

  [[nodiscard]] const frontend::SourceUnit& context() const noexcept { return context_; }
  [[nodiscard]] pipeline::Cursor cursor() const noexcept { return cursor_; }
  [[nodiscard]] const frontend::TypeRegistry& registry() const noexcept { return *registry_; }

 private:
  frontend::SourceUnit context_;
  pipeline::Cursor cursor_;
  const frontend::TypeRegistry* registry_;
};

}  // namespace snipfit::repair
