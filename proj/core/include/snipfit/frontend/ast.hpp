#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace snipfit::frontend {

struct Expr;
struct Stmt;
struct MethodDecl;
struct ClassDecl;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

/// Byte range [begin, end) in the parsed unit.
struct Range {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

/// A written type: primitive keyword, `void`, or a possibly-qualified name,
/// followed by `dims` pairs of brackets.
struct TypeRef {
  std::string name;
  int dims = 0;
  Range range;

  [[nodiscard]] bool empty() const noexcept { return name.empty(); }
  [[nodiscard]] std::string spelled() const;
};

enum class ExprKind {
  literal,
  name,          // text = identifier
  field_access,  // target.text
  call,          // [target.]text(args)
  index,         // args[0][args[1]]
  unary,         // text = op, args[0]
  postfix,       // args[0] text
  binary,        // args[0] text args[1]
  assign,        // args[0] text args[1]; text in = += -= *= /= %=
  ternary,       // args[0] ? args[1] : args[2]
  cast,          // (type) args[0]
  new_array,     // new type[args[0]], type.dims counts the allocated level too
  array_init,    // {args...}; type set when written as new T[]{...}
  new_object,    // new type(args...)
  error,
};

enum class LitKind { int_, long_, float_, double_, char_, string_, bool_, null_ };

struct Expr {
  ExprKind kind = ExprKind::error;
  Range range;
  Range name_range;  // identifier of name/field_access/call
  std::string text;
  LitKind lit = LitKind::null_;
  std::string value;  // decoded literal payload
  ExprPtr target;
  std::vector<ExprPtr> args;
  TypeRef type;
};

struct Declarator {
  std::string name;
  Range name_range;
  Range range;  // name through initializer
  int extra_dims = 0;
  ExprPtr init;
};

struct CatchClause {
  TypeRef type;
  std::string name;
  Range name_range;
  StmtPtr body;
};

enum class StmtKind {
  block,
  local_var,
  expr,
  if_,
  while_,
  for_,
  for_each,
  return_,
  break_,
  continue_,
  empty,
  try_,
  throw_,
  nested_method,
  nested_class,
  misplaced_import,
  error,
};

struct Stmt {
  StmtKind kind = StmtKind::error;
  Range range;
  std::vector<StmtPtr> body;  // block statements; for-init statements
  TypeRef type;               // local_var / for_each variable type
  std::vector<Declarator> decls;
  ExprPtr expr;  // expression, condition, return/throw value, for_each iterable
  std::vector<ExprPtr> update;
  StmtPtr then_branch;  // if then; loop body; try block
  StmtPtr else_branch;  // if else; finally block
  std::vector<CatchClause> catches;
  std::string text;  // for_each variable name; misplaced import name
  Range name_range;
  std::unique_ptr<MethodDecl> method;
  std::unique_ptr<ClassDecl> klass;
};

struct Param {
  TypeRef type;
  std::string name;
  Range name_range;
};

struct MethodDecl {
  std::vector<std::string> modifiers;
  std::vector<std::string> annotations;
  TypeRef ret;  // name "void" for void methods
  std::string name;
  Range name_range;
  std::vector<Param> params;
  StmtPtr body;  // block; null when the body is missing
  Range range;
};

struct FieldDecl {
  std::vector<std::string> modifiers;
  TypeRef type;
  std::vector<Declarator> decls;
  Range range;
};

struct ClassDecl {
  std::vector<std::string> modifiers;
  std::string name;
  Range name_range;
  std::vector<MethodDecl> methods;
  std::vector<FieldDecl> fields;
  std::vector<ClassDecl> classes;
  Range range;
};

struct ImportDecl {
  std::string name;  // qualified, without ".*"
  bool wildcard = false;
  bool is_static = false;
  Range range;
};

struct CompilationUnit {
  std::vector<ImportDecl> imports;
  std::vector<ClassDecl> classes;
  std::size_t error_nodes = 0;
};

}  // namespace snipfit::frontend
