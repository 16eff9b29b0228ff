#include "snipfit/frontend/diagnostics.hpp"

#include <array>

#include <nlohmann/json.hpp>

namespace snipfit::frontend {

namespace {

constexpr std::array<std::string_view, kDiagCodeCount> kNames = {
    "E_PARSE",           "E_MISSING_TOKEN",    "E_UNEXPECTED_TOKEN", "E_UNRESOLVED",
    "E_UNDECLARED_VAR",  "E_UNRESOLVED_TYPE",  "E_MISPLACED_IMPORT", "E_DUPLICATE_MEMBER",
    "E_NESTED_METHOD",   "E_TYPE_MISMATCH",    "E_MISSING_RETURN",   "E_ARITY",
};

}  // namespace

std::string_view code_name(DiagCode code) noexcept {
  const int i = static_cast<int>(code) - 1;
  if (i < 0 || i >= kDiagCodeCount) return "E_UNKNOWN";
  return kNames[static_cast<std::size_t>(i)];
}

std::optional<DiagCode> code_from_name(std::string_view name) noexcept {
  for (int i = 0; i < kDiagCodeCount; ++i) {
    if (kNames[static_cast<std::size_t>(i)] == name) return static_cast<DiagCode>(i + 1);
  }
  return std::nullopt;
}

nlohmann::json to_json(const Diagnostic& d) {
  nlohmann::json j;
  j["code"] = static_cast<int>(d.code);
  j["name"] = code_name(d.code);
  j["span"] = {{"start_line", d.span.start_line},
               {"start_col", d.span.start_col},
               {"end_line", d.span.end_line},
               {"end_col", d.span.end_col}};
  j["message"] = d.message;
  if (d.token) j["token"] = *d.token;
  if (d.hint) j["hint"] = *d.hint;
  if (d.inferred_type) j["inferred_type"] = *d.inferred_type;
  return j;
}

nlohmann::json to_json(const std::vector<Diagnostic>& ds) {
  auto arr = nlohmann::json::array();
  for (const auto& d : ds) arr.push_back(to_json(d));
  return arr;
}

}  // namespace snipfit::frontend
