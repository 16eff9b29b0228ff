#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "snipfit/frontend/ast.hpp"
#include "snipfit/frontend/library.hpp"
#include "snipfit/frontend/registry.hpp"
#include "snipfit/frontend/types.hpp"

namespace snipfit::frontend {

/// A name that denotes a type. `owner` is the class that holds its static
/// members: the qualified library class (wrappers for primitive aliases) or
/// the user class name.
struct TypeName {
  Type type;
  std::string owner;
  bool user = false;
};

/// Type-name lookup for one compilation unit: user classes, single-type and
/// on-demand imports, then implicit java.lang classes.
class NameResolver {
 public:
  NameResolver(const CompilationUnit& tree, const TypeRegistry& registry);

  /// Whether `imp` names something known to the registry or library.
  [[nodiscard]] bool import_resolves(const ImportDecl& imp) const;

  [[nodiscard]] std::optional<TypeName> lookup(const std::string& name) const;
  [[nodiscard]] std::optional<TypeName> qualified(const std::string& q) const;
  /// Resolves a written type; nullopt when the base name is unknown.
  [[nodiscard]] std::optional<Type> resolve(const TypeRef& ref) const;

  [[nodiscard]] const ClassDecl* user_class(const std::string& name) const;
  [[nodiscard]] const TypeRegistry& registry() const noexcept { return reg_; }
  [[nodiscard]] const Library& library() const noexcept { return lib_; }

 private:
  void collect(const ClassDecl& c);

  const TypeRegistry& reg_;
  const Library& lib_;
  std::unordered_map<std::string, std::string> imported_;
  std::vector<std::string> wildcards_;
  std::unordered_map<std::string, const ClassDecl*> user_classes_;
};

/// Owner class of instance members for a value of type `t` ("" if none).
std::string member_owner(const Type& t);

/// Type described by a library spec string such as "int", "String[]" or
/// "class:java.util.Optional"; unknown for pseudo specs.
Type spec_type(const std::string& spec);

}  // namespace snipfit::frontend
