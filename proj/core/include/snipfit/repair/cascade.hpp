#pragma once

#include "snipfit/repair/candidate.hpp"
#include "snipfit/repair/deletion.hpp"
#include "snipfit/repair/evaluator.hpp"

namespace snipfit::repair {

struct CascadeOptions {
  DeletionConfig deletion;
  bool integrate = true;
  bool targeted_fixes = true;
  bool delete_lines = true;
};

/// Runs the correction cascade on a freshly retrieved candidate: evaluate,
/// then (while errors remain) integration, targeted fixes, and line deletion.
/// `stage_errors` records the count on leaving every stage, stages that were
/// skipped repeating the previous value.
Candidate run_cascade(Candidate c, const Evaluator& eval, const CascadeOptions& opts = {});

}  // namespace snipfit::repair
