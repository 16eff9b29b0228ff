#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "snipfit/frontend/diagnostics.hpp"
#include "snipfit/frontend/source.hpp"

namespace snipfit::frontend {

enum class Tok : std::uint8_t {
  ident,
  keyword,
  int_lit,
  long_lit,
  float_lit,
  double_lit,
  char_lit,
  string_lit,
  true_lit,
  false_lit,
  null_lit,
  op,  // punctuation and operators, including "::", "->" and "@"
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string_view text;  // view into the unit text
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  std::uint32_t line = 1;  // 1-based line of `begin`
  bool malformed = false;  // unterminated literal; already diagnosed

  [[nodiscard]] bool is(std::string_view s) const noexcept {
    return (kind == Tok::op || kind == Tok::keyword) && text == s;
  }
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by a Tok::end token
  std::vector<Diagnostic> diagnostics;
};

/// Comments and whitespace are dropped. Invalid characters and unterminated
/// literals/comments are reported as E_PARSE and never abort lexing.
LexResult lex(const SourceUnit& unit);

bool is_keyword(std::string_view word) noexcept;
bool is_primitive_type_keyword(std::string_view word) noexcept;

Diagnostic make_diagnostic(const SourceUnit& unit, DiagCode code, std::size_t begin, std::size_t end,
                           std::string message);

}  // namespace snipfit::frontend
