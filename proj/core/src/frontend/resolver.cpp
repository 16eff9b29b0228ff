#include "snipfit/frontend/resolver.hpp"

namespace snipfit::frontend {

namespace {

std::string simple_name(const std::string& q) {
  const auto dot = q.rfind('.');
  return dot == std::string::npos ? q : q.substr(dot + 1);
}

std::string wrapper_owner(std::string_view name) {
  if (name == "Integer" || name == "Byte" || name == "Short") return "java.lang.Integer";
  if (name == "Long" || name == "Double" || name == "Float" || name == "Boolean" || name == "Character" ||
      name == "String") {
    return "java.lang." + std::string(name);
  }
  return {};
}

}  // namespace

NameResolver::NameResolver(const CompilationUnit& tree, const TypeRegistry& registry)
    : reg_(registry), lib_(Library::standard()) {
  for (const auto& imp : tree.imports) {
    if (imp.is_static || !import_resolves(imp)) continue;
    if (imp.wildcard) {
      wildcards_.push_back(imp.name);
    } else {
      imported_[simple_name(imp.name)] = imp.name;
    }
  }
  for (const auto& c : tree.classes) collect(c);
}

void NameResolver::collect(const ClassDecl& c) {
  if (!c.name.empty()) user_classes_.emplace(c.name, &c);
  for (const auto& n : c.classes) collect(n);
}

bool NameResolver::import_resolves(const ImportDecl& imp) const {
  if (imp.is_static) {
    std::string owner = imp.name;
    if (!imp.wildcard) {
      const auto dot = owner.rfind('.');
      owner = dot == std::string::npos ? std::string{} : owner.substr(0, dot);
    }
    return owner.rfind("org.junit", 0) == 0 || reg_.contains_qualified(owner) || lib_.find_class(owner) != nullptr;
  }
  if (imp.wildcard) return imp.name == "java.lang" || reg_.has_package(imp.name);
  return reg_.contains_qualified(imp.name) || lib_.find_class(imp.name) != nullptr;
}

std::optional<TypeName> NameResolver::qualified(const std::string& q) const {
  if (q.rfind("java.lang.", 0) == 0) {
    const auto rest = q.substr(10);
    if (auto b = builtin_type(rest); b && rest != "void") return TypeName{*b, wrapper_owner(rest), false};
  }
  if (reg_.contains_qualified(q) || lib_.find_class(q)) return TypeName{Type::klass(q), q, false};
  return std::nullopt;
}

std::optional<TypeName> NameResolver::lookup(const std::string& name) const {
  if (auto b = builtin_type(name)) return TypeName{*b, wrapper_owner(name), false};
  if (name.find('.') != std::string::npos) return qualified(name);
  if (user_classes_.count(name)) return TypeName{Type::klass(name), name, true};
  if (const auto it = imported_.find(name); it != imported_.end()) return qualified(it->second);
  for (const auto& pkg : wildcards_) {
    if (auto t = qualified(pkg + "." + name)) return t;
  }
  if (const auto* c = lib_.find_implicit(name)) return TypeName{Type::klass(c->qualified), c->qualified, false};
  return std::nullopt;
}

std::optional<Type> NameResolver::resolve(const TypeRef& ref) const {
  if (ref.empty()) return std::nullopt;
  auto t = lookup(ref.name);
  if (!t) return std::nullopt;
  Type r = t->type;
  r.dims += ref.dims;
  return r;
}

const ClassDecl* NameResolver::user_class(const std::string& name) const {
  const auto it = user_classes_.find(name);
  return it == user_classes_.end() ? nullptr : it->second;
}

std::string member_owner(const Type& t) {
  if (t.dims > 0) return "java.lang.Object";
  switch (t.base) {
    case BaseType::string_: return "java.lang.String";
    case BaseType::int_: return "java.lang.Integer";
    case BaseType::long_: return "java.lang.Long";
    case BaseType::double_: return "java.lang.Double";
    case BaseType::float_: return "java.lang.Float";
    case BaseType::boolean_: return "java.lang.Boolean";
    case BaseType::char_: return "java.lang.Character";
    case BaseType::class_: return t.cls;
    default: return {};
  }
}

Type spec_type(const std::string& spec) {
  if (spec.rfind("class:", 0) == 0) {
    const auto q = spec.substr(6);
    if (q == "java.lang.String") return Type::of(BaseType::string_);
    return Type::klass(q);
  }
  if (auto t = parse_type_name(spec)) return *t;
  return Type::unknown();
}

}  // namespace snipfit::frontend
