#include "snipfit/frontend/lexer.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>

namespace snipfit::frontend {

namespace {

constexpr std::string_view kKeywords[] = {
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",
};

constexpr std::string_view kOps[] = {
    ">>>=", "<<=", ">>=", ">>>", "...", "::", "->", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=",   "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", ">>",
};

constexpr std::string_view kSingleOps = "(){}[];,.?:=<>+-*/%!&|^~@";

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$'; }
bool ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

class Lexer {
 public:
  explicit Lexer(const SourceUnit& unit) : unit_(unit), src_(unit.text()) {}

  LexResult run() {
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      lex_token();
    }
    Token eof;
    eof.kind = Tok::end;
    eof.begin = eof.end = static_cast<std::uint32_t>(src_.size());
    eof.line = static_cast<std::uint32_t>(line_);
    out_.tokens.push_back(eof);
    return std::move(out_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void error(std::size_t b, std::size_t e, std::string msg) {
    out_.diagnostics.push_back(make_diagnostic(unit_, DiagCode::parse, b, e, std::move(msg)));
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const std::size_t start = pos_;
        advance();
        advance();
        bool closed = false;
        while (pos_ < src_.size()) {
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            closed = true;
            break;
          }
          advance();
        }
        if (!closed) error(start, start + 2, "unterminated comment");
      } else {
        break;
      }
    }
  }

  void push(Tok kind, std::size_t begin, std::size_t line, bool malformed = false) {
    Token t;
    t.kind = kind;
    t.begin = static_cast<std::uint32_t>(begin);
    t.end = static_cast<std::uint32_t>(pos_);
    t.text = src_.substr(begin, pos_ - begin);
    t.line = static_cast<std::uint32_t>(line);
    t.malformed = malformed;
    out_.tokens.push_back(t);
  }

  void lex_token() {
    const std::size_t begin = pos_;
    const std::size_t line = line_;
    const auto c = static_cast<unsigned char>(peek());

    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(peek()))) advance();
      const auto word = src_.substr(begin, pos_ - begin);
      if (word == "true") {
        push(Tok::true_lit, begin, line);
      } else if (word == "false") {
        push(Tok::false_lit, begin, line);
      } else if (word == "null") {
        push(Tok::null_lit, begin, line);
      } else {
        push(is_keyword(word) ? Tok::keyword : Tok::ident, begin, line);
      }
      return;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(begin, line);
      return;
    }
    if (c == '"') {
      lex_quoted('"', Tok::string_lit, begin, line);
      return;
    }
    if (c == '\'') {
      lex_quoted('\'', Tok::char_lit, begin, line);
      return;
    }
    for (auto op : kOps) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        push(Tok::op, begin, line);
        return;
      }
    }
    if (kSingleOps.find(static_cast<char>(c)) != std::string_view::npos) {
      advance();
      push(Tok::op, begin, line);
      return;
    }
    // Invalid byte: report one diagnostic per run of invalid bytes.
    while (pos_ < src_.size()) {
      const auto d = static_cast<unsigned char>(peek());
      if (ident_start(d) || std::isdigit(d) || std::isspace(d) || d == '"' || d == '\'' ||
          kSingleOps.find(static_cast<char>(d)) != std::string_view::npos)
        break;
      advance();
    }
    error(begin, pos_, "invalid character in source");
  }

  void lex_number(std::size_t begin, std::size_t line) {
    bool is_float = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance();
      advance();
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        is_float = true;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      } else if (peek() == '.' && !std::isalpha(static_cast<unsigned char>(peek(1))) && peek(1) != '.') {
        is_float = true;  // "1." is a double literal
        advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        const char n1 = peek(1);
        const char n2 = peek(2);
        if (std::isdigit(static_cast<unsigned char>(n1)) ||
            ((n1 == '+' || n1 == '-') && std::isdigit(static_cast<unsigned char>(n2)))) {
          is_float = true;
          advance();
          if (peek() == '+' || peek() == '-') advance();
          while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
      }
    }
    Tok kind = is_float ? Tok::double_lit : Tok::int_lit;
    const char s = peek();
    if (s == 'l' || s == 'L') {
      advance();
      kind = is_float ? Tok::double_lit : Tok::long_lit;
    } else if (s == 'f' || s == 'F') {
      advance();
      kind = Tok::float_lit;
    } else if (s == 'd' || s == 'D') {
      advance();
      kind = Tok::double_lit;
    }
    push(kind, begin, line);
  }

  void lex_quoted(char quote, Tok kind, std::size_t begin, std::size_t line) {
    advance();
    bool closed = false;
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == '\n') break;
      if (c == '\\' && pos_ + 1 < src_.size() && peek(1) != '\n') {
        advance();
        advance();
        continue;
      }
      advance();
      if (c == quote) {
        closed = true;
        break;
      }
    }
    if (!closed) {
      error(begin, pos_, quote == '"' ? "unterminated string literal" : "unterminated character literal");
    }
    push(kind, begin, line, !closed);
  }

  const SourceUnit& unit_;
  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  LexResult out_;
};

}  // namespace

bool is_keyword(std::string_view word) noexcept {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

bool is_primitive_type_keyword(std::string_view word) noexcept {
  return word == "int" || word == "long" || word == "double" || word == "float" || word == "boolean" ||
         word == "char" || word == "byte" || word == "short";
}

Diagnostic make_diagnostic(const SourceUnit& unit, DiagCode code, std::size_t begin, std::size_t end,
                           std::string message) {
  Diagnostic d;
  d.code = code;
  d.begin = std::min(begin, unit.text().size());
  d.end = std::clamp(end, d.begin, unit.text().size());
  const auto s = unit.position_of(d.begin);
  const auto e = unit.position_of(d.end);
  d.span = Span{s.line, s.col, e.line, e.col};
  d.message = std::move(message);
  return d;
}

LexResult lex(const SourceUnit& unit) { return Lexer(unit).run(); }

}  // namespace snipfit::frontend
