#include "snipfit/frontend/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <limits>

#include "snipfit/frontend/lexer.hpp"

namespace snipfit::frontend {

std::string TypeRef::spelled() const {
  std::string s = name;
  for (int i = 0; i < dims; ++i) s += "[]";
  return s;
}

namespace {

constexpr int kMaxDepth = 200;

bool is_modifier(const Token& t) {
  if (t.kind != Tok::keyword) return false;
  return t.text == "public" || t.text == "private" || t.text == "protected" || t.text == "static" ||
         t.text == "final" || t.text == "abstract" || t.text == "native" || t.text == "transient" ||
         t.text == "volatile" || t.text == "strictfp" || t.text == "synchronized" || t.text == "default";
}

bool is_assign_op(const Token& t) {
  return t.kind == Tok::op && (t.text == "=" || t.text == "+=" || t.text == "-=" || t.text == "*=" ||
                               t.text == "/=" || t.text == "%=" || t.text == "&=" || t.text == "|=" ||
                               t.text == "^=" || t.text == "<<=" || t.text == ">>=" || t.text == ">>>=");
}

int binary_precedence(const Token& t) {
  if (t.kind == Tok::keyword && t.text == "instanceof") return 7;
  if (t.kind != Tok::op) return -1;
  const auto s = t.text;
  if (s == "||") return 1;
  if (s == "&&") return 2;
  if (s == "|") return 3;
  if (s == "^") return 4;
  if (s == "&") return 5;
  if (s == "==" || s == "!=") return 6;
  if (s == "<" || s == ">" || s == "<=" || s == ">=") return 7;
  if (s == "<<" || s == ">>" || s == ">>>") return 8;
  if (s == "+" || s == "-") return 9;
  if (s == "*" || s == "/" || s == "%") return 10;
  return -1;
}

bool decode_escapes(std::string_view body, std::string& out) {
  out.clear();
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i >= body.size()) return false;
    switch (body[i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 's': out.push_back(' '); break;
      case '0': out.push_back('\0'); break;
      case '\\': out.push_back('\\'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      case 'u': {
        std::size_t j = i + 1;
        while (j < body.size() && body[j] == 'u') ++j;
        if (j + 4 > body.size()) return false;
        unsigned v = 0;
        const auto* first = body.data() + j;
        auto [p, ec] = std::from_chars(first, first + 4, v, 16);
        if (ec != std::errc() || p != first + 4) return false;
        out.push_back(v < 0x80 ? static_cast<char>(v) : '?');
        i = j + 3;
        break;
      }
      default:
        return false;
    }
  }
  return true;
}

class Parser {
 public:
  Parser(const SourceUnit& unit, std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : unit_(unit), toks_(std::move(tokens)), diags_(diags) {}

  CompilationUnit parse_unit() {
    while (!at_end()) {
      if (at("import")) {
        auto imp = parse_import();
        if (!tree_.classes.empty()) {
          diag(DiagCode::misplaced_import, imp.range.begin, imp.range.end,
               "import declarations must precede type declarations", std::nullopt, imp.name);
        } else {
          tree_.imports.push_back(std::move(imp));
        }
        continue;
      }
      if (at("package")) {
        while (!at_end() && !at(";")) advance();
        accept(";");
        continue;
      }
      const std::size_t start = pos_;
      auto mods = parse_modifiers();
      if (at("class")) {
        tree_.classes.push_back(parse_class(std::move(mods), toks_[start].begin));
        continue;
      }
      if (at("interface") || at("enum")) {
        unsupported("interface and enum declarations are not supported");
        skip_balanced_declaration();
        continue;
      }
      const Token& t = cur();
      if (t.kind == Tok::end) {
        if (pos_ != start) {
          error_node();
          diag(DiagCode::parse, toks_[start].begin, prev().end, "declaration expected after modifiers");
        }
        break;
      }
      unexpected(t);
      skip_top_level();
    }
    return std::move(tree_);
  }

  std::vector<StmtPtr> parse_statements_to_end() {
    std::vector<StmtPtr> out;
    while (!at_end()) {
      if (at("}")) {
        unexpected(cur());
        advance();
        continue;
      }
      const std::size_t before = pos_;
      out.push_back(parse_statement());
      ensure_progress(before);
    }
    return out;
  }

  std::size_t error_nodes() const { return tree_.error_nodes; }

 private:
  // ---- token cursor -------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at_end() const { return cur().kind == Tok::end; }
  bool at(std::string_view s) const { return cur().is(s); }
  void advance() {
    if (!at_end()) ++pos_;
  }
  bool accept(std::string_view s) {
    if (!at(s)) return false;
    advance();
    return true;
  }
  std::uint32_t prev_end() const { return pos_ == 0 ? 0 : prev().end; }

  // ---- diagnostics --------------------------------------------------------

  void diag(DiagCode code, std::size_t b, std::size_t e, std::string msg,
            std::optional<std::string> token = std::nullopt, std::optional<std::string> hint = std::nullopt) {
    if (!diags_.empty()) {
      const auto& last = diags_.back();
      if (last.begin == b && last.code == code) return;
    }
    auto d = make_diagnostic(unit_, code, b, e, std::move(msg));
    d.token = std::move(token);
    d.hint = std::move(hint);
    diags_.push_back(std::move(d));
  }

  void error_node() { ++tree_.error_nodes; }

  void unexpected(const Token& t) {
    error_node();
    diag(DiagCode::unexpected_token, t.begin, t.end, "unexpected token '" + std::string(t.text) + "'",
         std::string(t.text), std::string(t.text));
  }

  void unsupported(std::string msg) {
    error_node();
    diag(DiagCode::parse, cur().begin, cur().end, std::move(msg), std::string(cur().text));
  }

  void missing(std::string_view tok) {
    const auto at_off = prev_end();
    diag(DiagCode::missing_token, at_off, at_off, "'" + std::string(tok) + "' expected", std::nullopt,
         std::string(tok));
  }

  bool expect(std::string_view tok) {
    if (accept(tok)) return true;
    missing(tok);
    return false;
  }

  void expect_semicolon() {
    if (accept(";")) return;
    const Token& c = cur();
    if (c.kind == Tok::end || c.is("}") || c.line > prev().line) {
      missing(";");
      return;
    }
    unexpected(c);
    sync_statement();
  }

  void ensure_progress(std::size_t before) {
    if (pos_ == before && !at_end()) {
      unexpected(cur());
      advance();
    }
  }

  bool enter() {
    if (++depth_ > kMaxDepth) {
      if (!bailed_) {
        bailed_ = true;
        error_node();
        diag(DiagCode::parse, cur().begin, cur().end, "nesting too deep");
      }
      pos_ = toks_.size() - 1;
      return false;
    }
    return true;
  }
  struct DepthGuard {
    Parser& p;
    ~DepthGuard() { --p.depth_; }
  };

  // ---- recovery -----------------------------------------------------------

  // Skips to just past ';' or to a closing '}' that belongs to an enclosing block.
  void sync_statement() {
    int depth = 0;
    while (!at_end()) {
      if (at("{") || at("(") || at("[")) {
        ++depth;
      } else if (at(")") || at("]")) {
        if (depth > 0) --depth;
      } else if (at("}")) {
        if (depth == 0) return;
        --depth;
        if (depth == 0) {
          advance();
          return;
        }
      } else if (at(";") && depth == 0) {
        advance();
        return;
      }
      advance();
    }
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    if (!at(open)) return;
    int depth = 0;
    while (!at_end()) {
      if (at(open)) ++depth;
      if (at(close)) {
        --depth;
        if (depth == 0) {
          advance();
          return;
        }
      }
      advance();
    }
  }

  void skip_balanced_declaration() {
    while (!at_end() && !at("{") && !at(";")) advance();
    if (at(";")) {
      advance();
      return;
    }
    skip_balanced("{", "}");
  }

  void skip_top_level() {
    int depth = 0;
    advance();
    while (!at_end()) {
      if (depth == 0 && (at("class") || at("import") || at("public") || at("@"))) return;
      if (at("{")) ++depth;
      if (at("}") && depth > 0) --depth;
      advance();
    }
  }

  void skip_member() {
    int depth = 0;
    while (!at_end()) {
      if (at("{")) {
        ++depth;
      } else if (at("}")) {
        if (depth == 0) return;
        if (--depth == 0) {
          advance();
          return;
        }
      } else if (at(";") && depth == 0) {
        advance();
        return;
      }
      advance();
    }
  }

  // ---- declarations -------------------------------------------------------

  ImportDecl parse_import() {
    ImportDecl imp;
    imp.range.begin = cur().begin;
    advance();  // import
    if (accept("static")) imp.is_static = true;
    if (cur().kind == Tok::ident) {
      imp.name = std::string(cur().text);
      advance();
      while (at(".")) {
        if (peek().kind == Tok::ident) {
          advance();
          imp.name += "." + std::string(cur().text);
          advance();
        } else if (peek().is("*")) {
          advance();
          advance();
          imp.wildcard = true;
          break;
        } else {
          break;
        }
      }
    } else {
      error_node();
      diag(DiagCode::parse, cur().begin, cur().end, "import name expected");
    }
    expect_semicolon();
    imp.range.end = prev_end();
    return imp;
  }

  std::vector<std::string> parse_modifiers(std::vector<std::string>* annotations = nullptr) {
    std::vector<std::string> mods;
    while (true) {
      if (at("@") && peek().kind == Tok::ident) {
        advance();
        std::string name(cur().text);
        advance();
        while (at(".") && peek().kind == Tok::ident) {
          advance();
          name += "." + std::string(cur().text);
          advance();
        }
        if (at("(")) skip_balanced("(", ")");
        if (annotations) annotations->push_back(name);
        continue;
      }
      if (is_modifier(cur()) && !(at("synchronized") && peek().is("("))) {
        mods.emplace_back(cur().text);
        advance();
        continue;
      }
      break;
    }
    return mods;
  }

  ClassDecl parse_class(std::vector<std::string> mods, std::uint32_t begin) {
    ClassDecl cls;
    cls.modifiers = std::move(mods);
    cls.range.begin = begin;
    advance();  // class
    if (cur().kind == Tok::ident) {
      cls.name = std::string(cur().text);
      cls.name_range = {cur().begin, cur().end};
      advance();
    } else {
      error_node();
      diag(DiagCode::parse, cur().begin, cur().end, "class name expected");
    }
    if (at("<")) {
      unsupported("generic type parameters are not supported");
      skip_angle();
    }
    if (accept("extends")) parse_type();
    if (accept("implements")) {
      parse_type();
      while (accept(",")) parse_type();
    }
    if (!accept("{")) {
      missing("{");
      if (!at_end() && !is_member_start()) {
        cls.range.end = prev_end();
        return cls;
      }
    }
    while (!at_end() && !at("}")) {
      const std::size_t before = pos_;
      if (!enter()) break;
      DepthGuard g{*this};
      parse_member(cls);
      ensure_progress(before);
    }
    if (!accept("}")) missing("}");
    cls.range.end = prev_end();
    return cls;
  }

  bool is_member_start() const {
    const Token& t = cur();
    return is_modifier(t) || t.is("@") || t.is("void") || t.is("class") || t.kind == Tok::ident ||
           (t.kind == Tok::keyword && is_primitive_type_keyword(t.text));
  }

  void parse_member(ClassDecl& cls) {
    const std::uint32_t begin = cur().begin;
    std::vector<std::string> annotations;
    auto mods = parse_modifiers(&annotations);
    if (at("class")) {
      cls.classes.push_back(parse_class(std::move(mods), begin));
      return;
    }
    if (at("interface") || at("enum")) {
      unsupported("interface and enum declarations are not supported");
      skip_balanced_declaration();
      return;
    }
    if (at("{")) {
      unsupported("initializer blocks are not supported");
      skip_balanced("{", "}");
      return;
    }
    if (at(";")) {
      advance();
      return;
    }
    const Token& t = cur();
    const bool type_start = t.kind == Tok::ident || t.is("void") ||
                            (t.kind == Tok::keyword && is_primitive_type_keyword(t.text));
    if (!type_start) {
      unexpected(t);
      skip_member();
      return;
    }
    // Constructor: Name(
    if (t.kind == Tok::ident && peek().is("(")) {
      MethodDecl m;
      m.modifiers = std::move(mods);
      m.annotations = std::move(annotations);
      m.ret = TypeRef{"void", 0, {t.begin, t.begin}};
      m.name = std::string(t.text);
      m.name_range = {t.begin, t.end};
      m.range.begin = begin;
      advance();
      parse_method_rest(m);
      cls.methods.push_back(std::move(m));
      return;
    }
    TypeRef type = parse_type();
    if (cur().kind != Tok::ident) {
      unexpected(cur());
      skip_member();
      return;
    }
    const Token name = cur();
    advance();
    if (at("(")) {
      MethodDecl m;
      m.modifiers = std::move(mods);
      m.annotations = std::move(annotations);
      m.ret = std::move(type);
      m.name = std::string(name.text);
      m.name_range = {name.begin, name.end};
      m.range.begin = begin;
      parse_method_rest(m);
      cls.methods.push_back(std::move(m));
      return;
    }
    FieldDecl f;
    f.modifiers = std::move(mods);
    f.type = std::move(type);
    f.range.begin = begin;
    f.decls.push_back(parse_declarator_after_name(name));
    while (accept(",")) {
      if (cur().kind != Tok::ident) {
        unexpected(cur());
        break;
      }
      const Token n = cur();
      advance();
      f.decls.push_back(parse_declarator_after_name(n));
    }
    expect_semicolon();
    f.range.end = prev_end();
    cls.fields.push_back(std::move(f));
  }

  // After the method name; current token is '('.
  void parse_method_rest(MethodDecl& m) {
    advance();  // (
    if (!at(")")) {
      while (true) {
        while (at("final")) advance();
        if (at("@")) parse_modifiers();
        Param p;
        const Token& t = cur();
        if (!(t.kind == Tok::ident || (t.kind == Tok::keyword && is_primitive_type_keyword(t.text)))) {
          unexpected(t);
          while (!at_end() && !at(")") && !at("{") && !at(";")) advance();
          break;
        }
        p.type = parse_type();
        if (at("...")) {
          advance();
          p.type.dims += 1;
        }
        if (cur().kind == Tok::ident) {
          p.name = std::string(cur().text);
          p.name_range = {cur().begin, cur().end};
          advance();
          while (at("[") && peek().is("]")) {
            advance();
            advance();
            p.type.dims += 1;
          }
        } else {
          error_node();
          diag(DiagCode::parse, cur().begin, cur().end, "parameter name expected");
        }
        m.params.push_back(std::move(p));
        if (!accept(",")) break;
      }
    }
    expect(")");
    if (accept("throws")) {
      parse_type();
      while (accept(",")) parse_type();
    }
    if (at("{")) {
      m.body = parse_block();
    } else if (!accept(";")) {
      missing("{");
    }
    m.range.end = prev_end();
  }

  void skip_angle() {
    int depth = 0;
    while (!at_end()) {
      if (at("<")) {
        ++depth;
      } else if (at(">")) {
        --depth;
      } else if (at(">>")) {
        depth -= 2;
      } else if (at(">>>")) {
        depth -= 3;
      } else if (at(";") || at("{") || at("(") || at(")")) {
        return;
      }
      advance();
      if (depth <= 0) return;
    }
  }

  TypeRef parse_type() {
    TypeRef t;
    t.range.begin = cur().begin;
    const Token& c = cur();
    if ((c.kind == Tok::keyword && (is_primitive_type_keyword(c.text) || c.text == "void"))) {
      t.name = std::string(c.text);
      advance();
    } else if (c.kind == Tok::ident) {
      t.name = std::string(c.text);
      advance();
      while (at(".") && peek().kind == Tok::ident) {
        advance();
        t.name += "." + std::string(cur().text);
        advance();
      }
      if (at("<")) {
        unsupported("generic type arguments are not supported");
        skip_angle();
      }
    } else {
      error_node();
      diag(DiagCode::parse, c.begin, c.end, "type expected");
    }
    while (at("[") && peek().is("]")) {
      advance();
      advance();
      ++t.dims;
    }
    t.range.end = prev_end();
    return t;
  }

  // Looks ahead for `Type Ident` without consuming.
  bool is_local_decl_start() const {
    std::size_t i = pos_;
    const auto tk = [&](std::size_t k) -> const Token& { return toks_[std::min(k, toks_.size() - 1)]; };
    if (tk(i).kind == Tok::keyword && is_primitive_type_keyword(tk(i).text)) {
      return !tk(i + 1).is(".");
    }
    if (tk(i).kind != Tok::ident) return false;
    ++i;
    while (tk(i).is(".") && tk(i + 1).kind == Tok::ident) i += 2;
    if (tk(i).is("<")) {
      int depth = 0;
      while (tk(i).kind != Tok::end) {
        if (tk(i).is("<")) {
          ++depth;
        } else if (tk(i).is(">")) {
          --depth;
        } else if (tk(i).is(">>")) {
          depth -= 2;
        } else if (tk(i).is(",") || tk(i).is("?") || tk(i).is(".") || tk(i).kind == Tok::ident ||
                   tk(i).is("[") || tk(i).is("]") || tk(i).is("extends") ||
                   (tk(i).kind == Tok::keyword && is_primitive_type_keyword(tk(i).text))) {
        } else {
          return false;
        }
        ++i;
        if (depth <= 0) break;
      }
    }
    while (tk(i).is("[") && tk(i + 1).is("]")) i += 2;
    return tk(i).kind == Tok::ident;
  }

  Declarator parse_declarator_after_name(const Token& name) {
    Declarator d;
    d.name = std::string(name.text);
    d.name_range = {name.begin, name.end};
    d.range.begin = name.begin;
    while (at("[") && peek().is("]")) {
      advance();
      advance();
      ++d.extra_dims;
    }
    if (accept("=")) {
      d.init = at("{") ? parse_array_init(TypeRef{}) : parse_expr();
    }
    d.range.end = prev_end();
    return d;
  }

  // ---- statements ---------------------------------------------------------

  StmtPtr make_stmt(StmtKind kind, std::uint32_t begin) {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->range.begin = begin;
    return s;
  }

  StmtPtr finish(StmtPtr s) {
    s->range.end = std::max(s->range.begin, prev_end());
    return s;
  }

  StmtPtr parse_block() {
    auto s = make_stmt(StmtKind::block, cur().begin);
    if (!enter()) return finish(std::move(s));
    DepthGuard g{*this};
    expect("{");
    while (!at_end() && !at("}")) {
      const std::size_t before = pos_;
      s->body.push_back(parse_statement());
      ensure_progress(before);
    }
    if (!accept("}")) missing("}");
    return finish(std::move(s));
  }

  StmtPtr parse_statement() {
    const std::uint32_t begin = cur().begin;
    if (!enter()) return finish(make_stmt(StmtKind::error, begin));
    DepthGuard g{*this};
    const Token& t = cur();

    if (t.is("{")) return parse_block();
    if (t.is(";")) {
      advance();
      return finish(make_stmt(StmtKind::empty, begin));
    }
    if (t.kind == Tok::keyword) {
      const auto w = t.text;
      if (w == "if") return parse_if();
      if (w == "while") return parse_while();
      if (w == "for") return parse_for();
      if (w == "return") {
        advance();
        auto s = make_stmt(StmtKind::return_, begin);
        if (!at(";") && !at("}") && !(cur().line > prev().line && !starts_expression())) s->expr = parse_expr();
        expect_semicolon();
        return finish(std::move(s));
      }
      if (w == "break" || w == "continue") {
        advance();
        auto s = make_stmt(w == "break" ? StmtKind::break_ : StmtKind::continue_, begin);
        if (cur().kind == Tok::ident && cur().line == prev().line) advance();
        expect_semicolon();
        return finish(std::move(s));
      }
      if (w == "throw") {
        advance();
        auto s = make_stmt(StmtKind::throw_, begin);
        s->expr = parse_expr();
        expect_semicolon();
        return finish(std::move(s));
      }
      if (w == "try") return parse_try();
      if (w == "import") {
        auto imp = parse_import();
        auto s = make_stmt(StmtKind::misplaced_import, begin);
        s->text = imp.name;
        s->range.end = imp.range.end;
        return s;
      }
      if (w == "class") {
        unexpected(t);
        auto s = make_stmt(StmtKind::nested_class, begin);
        s->klass = std::make_unique<ClassDecl>(parse_class({}, begin));
        return finish(std::move(s));
      }
      if (w == "do" || w == "switch" || w == "assert" || w == "synchronized" || w == "interface" ||
          w == "enum") {
        unsupported("'" + std::string(w) + "' statements are not supported");
        auto s = make_stmt(StmtKind::error, begin);
        skip_unsupported_statement(w == "do");
        return finish(std::move(s));
      }
      if (w == "else" || w == "catch" || w == "finally" || w == "case" || w == "default") {
        unexpected(t);
        advance();
        return finish(make_stmt(StmtKind::error, begin));
      }
      if (w == "final" && !peek().is("class")) {
        while (at("final")) advance();
        if (is_local_decl_start()) return parse_local_or_method(begin, {});
        unexpected(cur());
        sync_statement();
        return finish(make_stmt(StmtKind::error, begin));
      }
      if (is_modifier(t) || w == "void") return parse_nested_member(begin);
    }
    if (t.is("@")) return parse_nested_member(begin);
    if (is_local_decl_start()) return parse_local_or_method(begin, {});

    auto s = make_stmt(StmtKind::expr, begin);
    s->expr = parse_expr();
    if (s->expr->kind != ExprKind::error && !is_statement_expression(*s->expr)) {
      error_node();
      diag(DiagCode::parse, s->expr->range.begin, s->expr->range.end, "not a statement");
    }
    expect_semicolon();
    return finish(std::move(s));
  }

  bool starts_expression() const {
    const Token& t = cur();
    return t.kind == Tok::ident || t.kind == Tok::int_lit || t.kind == Tok::string_lit || t.is("(") ||
           t.is("new") || t.is("!") || t.is("-");
  }

  static bool is_statement_expression(const Expr& e) {
    switch (e.kind) {
      case ExprKind::assign:
      case ExprKind::call:
      case ExprKind::new_object:
      case ExprKind::postfix:
        return true;
      case ExprKind::unary:
        return e.text == "++" || e.text == "--";
      default:
        return false;
    }
  }

  void skip_unsupported_statement(bool is_do) {
    advance();
    if (at("(")) skip_balanced("(", ")");
    if (at("{")) {
      skip_balanced("{", "}");
      if (is_do && at("while")) {
        advance();
        if (at("(")) skip_balanced("(", ")");
        accept(";");
      }
      return;
    }
    sync_statement();
  }

  StmtPtr parse_nested_member(std::uint32_t begin) {
    std::vector<std::string> annotations;
    auto mods = parse_modifiers(&annotations);
    if (at("class")) {
      auto s = make_stmt(StmtKind::nested_class, begin);
      s->klass = std::make_unique<ClassDecl>(parse_class(std::move(mods), begin));
      return finish(std::move(s));
    }
    if (at("void") || is_local_decl_start()) return parse_local_or_method(begin, std::move(mods));
    if (cur().kind == Tok::ident && peek().is("(")) {
      // modifiers followed by a call-like construct: treat as constructor-shaped method
      auto s = make_stmt(StmtKind::nested_method, begin);
      auto m = std::make_unique<MethodDecl>();
      m->modifiers = std::move(mods);
      m->ret = TypeRef{"void", 0, {cur().begin, cur().begin}};
      m->name = std::string(cur().text);
      m->name_range = {cur().begin, cur().end};
      m->range.begin = begin;
      advance();
      parse_method_rest(*m);
      s->method = std::move(m);
      return finish(std::move(s));
    }
    unexpected(cur());
    sync_statement();
    return finish(make_stmt(StmtKind::error, begin));
  }

  // Current token starts a type; decides between local variable and nested method.
  StmtPtr parse_local_or_method(std::uint32_t begin, std::vector<std::string> mods) {
    TypeRef type = parse_type();
    if (cur().kind != Tok::ident) {
      unexpected(cur());
      sync_statement();
      return finish(make_stmt(StmtKind::error, begin));
    }
    const Token name = cur();
    advance();
    if (at("(")) {
      auto s = make_stmt(StmtKind::nested_method, begin);
      auto m = std::make_unique<MethodDecl>();
      m->modifiers = std::move(mods);
      m->ret = std::move(type);
      m->name = std::string(name.text);
      m->name_range = {name.begin, name.end};
      m->range.begin = begin;
      parse_method_rest(*m);
      s->method = std::move(m);
      return finish(std::move(s));
    }
    auto s = make_stmt(StmtKind::local_var, begin);
    s->type = std::move(type);
    s->decls.push_back(parse_declarator_after_name(name));
    while (accept(",")) {
      if (cur().kind != Tok::ident) {
        unexpected(cur());
        sync_statement();
        return finish(std::move(s));
      }
      const Token n = cur();
      advance();
      s->decls.push_back(parse_declarator_after_name(n));
    }
    expect_semicolon();
    return finish(std::move(s));
  }

  ExprPtr parse_condition() {
    if (!expect("(")) {
      auto e = parse_expr();
      return e;
    }
    auto e = parse_expr();
    expect(")");
    return e;
  }

  StmtPtr parse_if() {
    auto s = make_stmt(StmtKind::if_, cur().begin);
    advance();
    s->expr = parse_condition();
    s->then_branch = parse_statement();
    if (accept("else")) s->else_branch = parse_statement();
    return finish(std::move(s));
  }

  StmtPtr parse_while() {
    auto s = make_stmt(StmtKind::while_, cur().begin);
    advance();
    s->expr = parse_condition();
    s->then_branch = parse_statement();
    return finish(std::move(s));
  }

  StmtPtr parse_for() {
    const std::uint32_t begin = cur().begin;
    advance();
    if (!expect("(")) {
      auto s = make_stmt(StmtKind::error, begin);
      error_node();
      sync_statement();
      return finish(std::move(s));
    }
    while (at("final")) advance();
    if (is_local_decl_start()) {
      const std::uint32_t decl_begin = cur().begin;
      TypeRef type = parse_type();
      const Token name = cur();
      advance();
      if (accept(":")) {
        auto s = make_stmt(StmtKind::for_each, begin);
        s->type = std::move(type);
        s->text = std::string(name.text);
        s->name_range = {name.begin, name.end};
        s->expr = parse_expr();
        expect(")");
        s->then_branch = parse_statement();
        return finish(std::move(s));
      }
      auto s = make_stmt(StmtKind::for_, begin);
      auto decl = make_stmt(StmtKind::local_var, decl_begin);
      decl->type = std::move(type);
      decl->decls.push_back(parse_declarator_after_name(name));
      while (accept(",") && cur().kind == Tok::ident) {
        const Token n = cur();
        advance();
        decl->decls.push_back(parse_declarator_after_name(n));
      }
      s->body.push_back(finish(std::move(decl)));
      return parse_for_rest(std::move(s));
    }
    auto s = make_stmt(StmtKind::for_, begin);
    if (!at(";")) {
      do {
        auto e = make_stmt(StmtKind::expr, cur().begin);
        e->expr = parse_expr();
        s->body.push_back(finish(std::move(e)));
      } while (accept(","));
    }
    return parse_for_rest(std::move(s));
  }

  StmtPtr parse_for_rest(StmtPtr s) {
    expect(";");
    if (!at(";")) s->expr = parse_expr();
    expect(";");
    if (!at(")")) {
      do {
        s->update.push_back(parse_expr());
      } while (accept(","));
    }
    expect(")");
    s->then_branch = parse_statement();
    return finish(std::move(s));
  }

  StmtPtr parse_try() {
    auto s = make_stmt(StmtKind::try_, cur().begin);
    advance();
    if (at("(")) {
      unsupported("try-with-resources is not supported");
      skip_balanced("(", ")");
    }
    if (!at("{")) {
      missing("{");
      return finish(std::move(s));
    }
    s->then_branch = parse_block();
    while (at("catch")) {
      advance();
      CatchClause c;
      expect("(");
      while (at("final")) advance();
      c.type = parse_type();
      while (accept("|")) parse_type();
      if (cur().kind == Tok::ident) {
        c.name = std::string(cur().text);
        c.name_range = {cur().begin, cur().end};
        advance();
      } else {
        error_node();
        diag(DiagCode::parse, cur().begin, cur().end, "catch parameter name expected");
      }
      expect(")");
      if (at("{")) {
        c.body = parse_block();
      } else {
        missing("{");
      }
      s->catches.push_back(std::move(c));
    }
    if (accept("finally")) {
      if (at("{")) {
        s->else_branch = parse_block();
      } else {
        missing("{");
      }
    }
    if (s->catches.empty() && !s->else_branch) {
      missing("catch");
    }
    return finish(std::move(s));
  }

  // ---- expressions --------------------------------------------------------

  ExprPtr make_expr(ExprKind kind, std::uint32_t begin) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->range.begin = begin;
    return e;
  }

  ExprPtr finish(ExprPtr e) {
    e->range.end = std::max(e->range.begin, prev_end());
    return e;
  }

  ExprPtr error_expr(std::uint32_t begin) {
    auto e = make_expr(ExprKind::error, begin);
    return finish(std::move(e));
  }

  ExprPtr parse_expr() {
    const std::uint32_t begin = cur().begin;
    if (!enter()) {
      return error_expr(begin);
    }
    DepthGuard g{*this};
    return parse_assignment();
  }

  ExprPtr parse_assignment() {
    const std::uint32_t begin = cur().begin;
    auto lhs = parse_ternary();
    if (is_assign_op(cur())) {
      auto e = make_expr(ExprKind::assign, begin);
      e->text = std::string(cur().text);
      advance();
      const bool valid_target = lhs->kind == ExprKind::name || lhs->kind == ExprKind::field_access ||
                                lhs->kind == ExprKind::index || lhs->kind == ExprKind::error;
      if (!valid_target) {
        error_node();
        diag(DiagCode::parse, lhs->range.begin, lhs->range.end, "invalid assignment target");
      }
      e->args.push_back(std::move(lhs));
      e->args.push_back(at("{") ? parse_array_init(TypeRef{}) : parse_expr());
      if (!valid_target) e->kind = ExprKind::error;
      return finish(std::move(e));
    }
    return lhs;
  }

  ExprPtr parse_ternary() {
    const std::uint32_t begin = cur().begin;
    auto c = parse_binary(1);
    if (!at("?")) return c;
    advance();
    auto e = make_expr(ExprKind::ternary, begin);
    e->args.push_back(std::move(c));
    e->args.push_back(parse_expr());
    expect(":");
    e->args.push_back(parse_ternary());
    return finish(std::move(e));
  }

  ExprPtr parse_binary(int min_prec) {
    const std::uint32_t begin = cur().begin;
    auto lhs = parse_unary();
    while (true) {
      const int prec = binary_precedence(cur());
      if (prec < min_prec) break;
      if (cur().is("instanceof")) {
        advance();
        auto e = make_expr(ExprKind::binary, begin);
        e->text = "instanceof";
        e->args.push_back(std::move(lhs));
        auto rhs = make_expr(ExprKind::name, cur().begin);
        rhs->type = parse_type();
        rhs->text = rhs->type.name;
        e->args.push_back(finish(std::move(rhs)));
        lhs = finish(std::move(e));
        continue;
      }
      auto e = make_expr(ExprKind::binary, begin);
      e->text = std::string(cur().text);
      advance();
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_binary(prec + 1));
      lhs = finish(std::move(e));
    }
    return lhs;
  }

  // `(` Type `)` followed by something that can start an operand.
  bool looks_like_cast() const {
    if (!at("(")) return false;
    const Token& t1 = peek(1);
    if (t1.kind == Tok::keyword && is_primitive_type_keyword(t1.text)) {
      std::size_t i = 2;
      while (peek(i).is("[") && peek(i + 1).is("]")) i += 2;
      return peek(i).is(")");
    }
    if (t1.kind != Tok::ident) return false;
    std::size_t i = 2;
    while (peek(i).is(".") && peek(i + 1).kind == Tok::ident) i += 2;
    while (peek(i).is("[") && peek(i + 1).is("]")) i += 2;
    if (!peek(i).is(")")) return false;
    const Token& after = peek(i + 1);
    return after.kind == Tok::ident || after.kind == Tok::string_lit || after.kind == Tok::int_lit ||
           after.kind == Tok::char_lit || after.kind == Tok::double_lit || after.is("(") || after.is("!") ||
           after.is("~") || after.is("new") || after.kind == Tok::true_lit || after.kind == Tok::false_lit;
  }

  ExprPtr parse_unary() {
    const std::uint32_t begin = cur().begin;
    if (!enter()) return error_expr(begin);
    DepthGuard g{*this};
    const Token& t = cur();
    if (t.kind == Tok::op && (t.text == "+" || t.text == "-" || t.text == "!" || t.text == "~" ||
                              t.text == "++" || t.text == "--")) {
      auto e = make_expr(ExprKind::unary, begin);
      e->text = std::string(t.text);
      advance();
      e->args.push_back(parse_unary());
      return finish(std::move(e));
    }
    if (looks_like_cast()) {
      advance();
      auto e = make_expr(ExprKind::cast, begin);
      e->type = parse_type();
      expect(")");
      e->args.push_back(parse_unary());
      return finish(std::move(e));
    }
    return parse_postfix(parse_primary());
  }

  ExprPtr parse_postfix(ExprPtr e) {
    const std::uint32_t begin = e->range.begin;
    while (true) {
      if (at(".")) {
        advance();
        if (cur().kind != Tok::ident) {
          error_node();
          diag(DiagCode::parse, cur().begin, cur().end, "identifier expected after '.'");
          if (at("class") || at("new") || at("this")) advance();
          auto err = make_expr(ExprKind::error, begin);
          err->target = std::move(e);
          e = finish(std::move(err));
          continue;
        }
        const Token name = cur();
        advance();
        if (at("(")) {
          auto call = make_expr(ExprKind::call, begin);
          call->text = std::string(name.text);
          call->name_range = {name.begin, name.end};
          call->target = std::move(e);
          parse_args(call->args);
          e = finish(std::move(call));
        } else {
          auto fa = make_expr(ExprKind::field_access, begin);
          fa->text = std::string(name.text);
          fa->name_range = {name.begin, name.end};
          fa->target = std::move(e);
          e = finish(std::move(fa));
        }
        continue;
      }
      if (at("[")) {
        advance();
        auto ix = make_expr(ExprKind::index, begin);
        ix->args.push_back(std::move(e));
        ix->args.push_back(parse_expr());
        expect("]");
        e = finish(std::move(ix));
        continue;
      }
      if (at("++") || at("--")) {
        auto p = make_expr(ExprKind::postfix, begin);
        p->text = std::string(cur().text);
        advance();
        p->args.push_back(std::move(e));
        e = finish(std::move(p));
        continue;
      }
      if (at("::")) {
        error_node();
        diag(DiagCode::parse, cur().begin, cur().end, "method references are not supported",
             std::string(cur().text));
        advance();
        if (cur().kind == Tok::ident || at("new")) advance();
        auto err = make_expr(ExprKind::error, begin);
        err->target = std::move(e);
        e = finish(std::move(err));
        continue;
      }
      return e;
    }
  }

  void parse_args(std::vector<ExprPtr>& out) {
    advance();  // (
    if (accept(")")) return;
    while (true) {
      out.push_back(parse_expr());
      if (accept(",")) continue;
      break;
    }
    if (!accept(")")) {
      if (cur().line == prev().line && !at(";") && !at("}") && !at_end() && !at("{")) {
        unexpected(cur());
        while (!at_end() && !at(")") && !at(";") && !at("}") && cur().line == prev().line) advance();
        accept(")");
      } else {
        missing(")");
      }
    }
  }

  // Consumes a lambda body after '->'.
  void skip_lambda_body() {
    if (at("{")) {
      skip_balanced("{", "}");
    } else {
      parse_expr();
    }
  }

  ExprPtr parse_primary() {
    const Token t = cur();
    const std::uint32_t begin = t.begin;
    switch (t.kind) {
      case Tok::int_lit:
      case Tok::long_lit:
      case Tok::float_lit:
      case Tok::double_lit:
      case Tok::char_lit:
      case Tok::string_lit:
      case Tok::true_lit:
      case Tok::false_lit:
      case Tok::null_lit:
        advance();
        return literal(t);
      case Tok::ident: {
        advance();
        if (at("->")) {
          error_node();
          diag(DiagCode::parse, cur().begin, cur().end, "lambda expressions are not supported",
               std::string(cur().text));
          advance();
          skip_lambda_body();
          return error_expr(begin);
        }
        if (at("(")) {
          auto call = make_expr(ExprKind::call, begin);
          call->text = std::string(t.text);
          call->name_range = {t.begin, t.end};
          parse_args(call->args);
          return finish(std::move(call));
        }
        auto e = make_expr(ExprKind::name, begin);
        e->text = std::string(t.text);
        e->name_range = {t.begin, t.end};
        return finish(std::move(e));
      }
      default:
        break;
    }
    if (t.is("(")) {
      if (is_paren_lambda()) {
        error_node();
        skip_balanced("(", ")");
        diag(DiagCode::parse, cur().begin, cur().end, "lambda expressions are not supported",
             std::string(cur().text));
        advance();  // ->
        skip_lambda_body();
        return error_expr(begin);
      }
      advance();
      auto inner = parse_expr();
      expect(")");
      inner->range.begin = begin;
      inner->range.end = prev_end();
      return inner;
    }
    if (t.is("new")) return parse_new();
    if (t.is("{")) return parse_array_init(TypeRef{});
    if (t.is("this") || t.is("super")) {
      error_node();
      diag(DiagCode::parse, t.begin, t.end, "'" + std::string(t.text) + "' is not supported", std::string(t.text));
      advance();
      return error_expr(begin);
    }
    error_node();
    if (t.kind == Tok::end || t.is(";") || t.is(")") || t.is("]") || t.is("}") || t.is(",")) {
      diag(DiagCode::parse, prev_end(), t.begin == prev_end() ? t.end : t.begin, "expression expected");
      return error_expr(begin);
    }
    diag(DiagCode::parse, t.begin, t.end, "expression expected", std::string(t.text));
    advance();
    return error_expr(begin);
  }

  bool is_paren_lambda() const {
    int depth = 0;
    std::size_t i = 0;
    while (true) {
      const Token& tk = peek(i);
      if (tk.kind == Tok::end) return false;
      if (tk.is("(")) ++depth;
      if (tk.is(")")) {
        if (--depth == 0) return peek(i + 1).is("->");
      }
      if (tk.is(";") || tk.is("{") || tk.is("}")) return false;
      ++i;
    }
  }

  ExprPtr parse_new() {
    const std::uint32_t begin = cur().begin;
    advance();  // new
    TypeRef type;
    type.range.begin = cur().begin;
    const Token& c = cur();
    if (c.kind == Tok::keyword && is_primitive_type_keyword(c.text)) {
      type.name = std::string(c.text);
      advance();
    } else if (c.kind == Tok::ident) {
      type.name = std::string(c.text);
      advance();
      while (at(".") && peek().kind == Tok::ident) {
        advance();
        type.name += "." + std::string(cur().text);
        advance();
      }
      if (at("<")) {
        unsupported("generic type arguments are not supported");
        skip_angle();
      }
    } else {
      error_node();
      diag(DiagCode::parse, c.begin, c.end, "type expected after 'new'");
      return error_expr(begin);
    }
    type.range.end = prev_end();
    if (at("[")) {
      if (peek().is("]")) {
        while (at("[") && peek().is("]")) {
          advance();
          advance();
          ++type.dims;
        }
        if (at("{")) {
          auto init = parse_array_init(type);
          init->range.begin = begin;
          return init;
        }
        missing("{");
        return error_expr(begin);
      }
      auto e = make_expr(ExprKind::new_array, begin);
      advance();
      e->args.push_back(parse_expr());
      expect("]");
      type.dims = 1;
      while (at("[")) {
        advance();
        if (!at("]")) e->args.push_back(parse_expr());
        expect("]");
        ++type.dims;
      }
      e->type = std::move(type);
      return finish(std::move(e));
    }
    if (at("(")) {
      auto e = make_expr(ExprKind::new_object, begin);
      e->type = std::move(type);
      parse_args(e->args);
      if (at("{")) {
        unsupported("anonymous classes are not supported");
        skip_balanced("{", "}");
        e->kind = ExprKind::error;
      }
      return finish(std::move(e));
    }
    missing("(");
    auto e = make_expr(ExprKind::new_object, begin);
    e->type = std::move(type);
    return finish(std::move(e));
  }

  ExprPtr parse_array_init(TypeRef type) {
    auto e = make_expr(ExprKind::array_init, cur().begin);
    e->type = std::move(type);
    advance();  // {
    while (!at_end() && !at("}")) {
      const std::size_t before = pos_;
      e->args.push_back(at("{") ? parse_array_init(TypeRef{}) : parse_expr());
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    if (!accept("}")) missing("}");
    return finish(std::move(e));
  }

  ExprPtr literal(const Token& t) {
    auto e = make_expr(ExprKind::literal, t.begin);
    e->text = std::string(t.text);
    switch (t.kind) {
      case Tok::int_lit:
      case Tok::long_lit: {
        e->lit = t.kind == Tok::int_lit ? LitKind::int_ : LitKind::long_;
        std::string digits;
        for (char ch : t.text) {
          if (ch != '_' && ch != 'l' && ch != 'L') digits.push_back(ch);
        }
        int base = 10;
        std::string_view dv(digits);
        if (dv.size() > 2 && dv[0] == '0' && (dv[1] == 'x' || dv[1] == 'X')) {
          base = 16;
          dv.remove_prefix(2);
        }
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(dv.data(), dv.data() + dv.size(), v, base);
        const std::uint64_t limit = e->lit == LitKind::int_
                                        ? (base == 16 ? 0xFFFFFFFFull : 2147483648ull)
                                        : (base == 16 ? 0xFFFFFFFFFFFFFFFFull : 9223372036854775808ull);
        if (ec != std::errc() || p != dv.data() + dv.size() || v > limit) {
          error_node();
          diag(DiagCode::parse, t.begin, t.end, "numeric literal out of range", std::string(t.text));
          e->kind = ExprKind::error;
        } else {
          if (base == 16 && e->lit == LitKind::int_) v = static_cast<std::uint64_t>(static_cast<std::int32_t>(v));
          e->value = base == 16 ? std::to_string(static_cast<std::int64_t>(v)) : std::to_string(v);
        }
        break;
      }
      case Tok::float_lit:
      case Tok::double_lit: {
        e->lit = t.kind == Tok::float_lit ? LitKind::float_ : LitKind::double_;
        for (char ch : t.text) {
          if (ch != '_' && ch != 'f' && ch != 'F' && ch != 'd' && ch != 'D') e->value.push_back(ch);
        }
        break;
      }
      case Tok::char_lit:
      case Tok::string_lit: {
        e->lit = t.kind == Tok::char_lit ? LitKind::char_ : LitKind::string_;
        if (t.malformed) {
          error_node();  // lexer already reported it
          e->kind = ExprKind::error;
          break;
        }
        const auto inner = t.text.substr(1, t.text.size() - 2);
        if (!decode_escapes(inner, e->value) || (e->lit == LitKind::char_ && e->value.size() != 1)) {
          error_node();
          diag(DiagCode::parse, t.begin, t.end,
               e->lit == LitKind::char_ ? "invalid character constant" : "invalid escape sequence",
               std::string(t.text));
          e->kind = ExprKind::error;
        }
        break;
      }
      case Tok::true_lit:
        e->lit = LitKind::bool_;
        e->value = "true";
        break;
      case Tok::false_lit:
        e->lit = LitKind::bool_;
        e->value = "false";
        break;
      default:
        e->lit = LitKind::null_;
        break;
    }
    return finish(std::move(e));
  }

  const SourceUnit& unit_;
  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  CompilationUnit tree_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  bool bailed_ = false;
};

}  // namespace

ParseResult parse(const SourceUnit& unit) {
  auto lexed = lex(unit);
  ParseResult out;
  out.diagnostics = std::move(lexed.diagnostics);
  const bool lex_errors = !out.diagnostics.empty();
  Parser p(unit, std::move(lexed.tokens), out.diagnostics);
  out.tree = p.parse_unit();
  if (lex_errors) out.tree.error_nodes += 1;
  return out;
}

StatementsResult parse_statements(std::string_view text) {
  SourceUnit unit{std::string(text)};
  auto lexed = lex(unit);
  StatementsResult out;
  out.diagnostics = std::move(lexed.diagnostics);
  Parser p(unit, std::move(lexed.tokens), out.diagnostics);
  out.statements = p.parse_statements_to_end();
  return out;
}

}  // namespace snipfit::frontend
