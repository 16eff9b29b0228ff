#pragma once

#include "snipfit/repair/candidate.hpp"
#include "snipfit/repair/evaluator.hpp"

namespace snipfit::repair {

/// Moves import lines from the body into `imports` (order kept, duplicates
/// dropped). Idempotent. The error count is refreshed but not gated.
Candidate extract_imports(Candidate c, const Evaluator& eval);

/// Removes the wrapper around a body that is exactly one class with one
/// method and no fields (and, for a lone method, the method header), keeping
/// the change only if the spliced error count does not grow.
Candidate snippetize(Candidate c, const Evaluator& eval);

/// Removes a snippet's own `main` header and its closing brace; kept only if
/// the spliced error count drops.
Candidate unwrap_main_in_main(Candidate c, const Evaluator& eval);

}  // namespace snipfit::repair
