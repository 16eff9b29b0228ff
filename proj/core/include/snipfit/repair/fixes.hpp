#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "snipfit/frontend/diagnostics.hpp"
#include "snipfit/repair/candidate.hpp"
#include "snipfit/repair/evaluator.hpp"

namespace snipfit::repair {

/// Brute-force declaration types, tried in this order.
inline constexpr std::array<std::string_view, 7> kBruteForceTypes{"int",    "char", "String", "boolean",
                                                                  "double", "long", "float"};

/// Default initializer for a declared type ("empty" for String, 0 for int, ...).
std::string default_initializer(std::string_view type);

/// One attempt per diagnostic: insert a missing token, add an import,
/// declare a variable, or delete a stray token. A trial is kept only if it
/// strictly lowers the spliced error count. Processed diagnostics are
/// remembered so none is retried and none skipped when the list shifts.
Candidate targeted_fix_pass(Candidate c, const Evaluator& eval);

/// Trial candidate for one diagnostic, or nullopt if no fix applies.
std::optional<Candidate> fix_missing_token(const Candidate& c, const frontend::Diagnostic& d, const Evaluator& eval);
std::optional<Candidate> fix_import(const Candidate& c, const frontend::Diagnostic& d, const Evaluator& eval);
std::optional<Candidate> fix_undeclared_variable(const Candidate& c, const frontend::Diagnostic& d,
                                                 const Evaluator& eval);
std::optional<Candidate> delete_error_token(const Candidate& c, const frontend::Diagnostic& d, const Evaluator& eval);

}  // namespace snipfit::repair
