#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace snipfit::frontend {

/// Integer values are stable; they key serialized histograms.
enum class DiagCode : int {
  parse = 1,             // E_PARSE
  missing_token = 2,     // E_MISSING_TOKEN; hint = expected token
  unexpected_token = 3,  // E_UNEXPECTED_TOKEN; token = offending lexeme
  unresolved = 4,        // E_UNRESOLVED; hint = name
  undeclared_var = 5,    // E_UNDECLARED_VAR; hint = name, inferred_type when assigned
  unresolved_type = 6,   // E_UNRESOLVED_TYPE; hint = simple type name
  misplaced_import = 7,  // E_MISPLACED_IMPORT; hint = qualified name
  duplicate_member = 8,  // E_DUPLICATE_MEMBER; hint = name
  nested_method = 9,     // E_NESTED_METHOD; hint = method name
  type_mismatch = 10,    // E_TYPE_MISMATCH
  missing_return = 11,   // E_MISSING_RETURN; hint = method name
  arity = 12,            // E_ARITY; hint = method name
};

inline constexpr int kDiagCodeCount = 12;

std::string_view code_name(DiagCode code) noexcept;
std::optional<DiagCode> code_from_name(std::string_view name) noexcept;

struct Span {
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Diagnostic {
  DiagCode code = DiagCode::parse;
  Span span;
  std::size_t begin = 0;  // byte offsets into the checked unit
  std::size_t end = 0;
  std::string message;
  std::optional<std::string> token;
  std::optional<std::string> hint;
  std::optional<std::string> inferred_type;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

nlohmann::json to_json(const Diagnostic& d);
nlohmann::json to_json(const std::vector<Diagnostic>& ds);

}  // namespace snipfit::frontend
