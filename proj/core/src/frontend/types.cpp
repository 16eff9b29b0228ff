#include "snipfit/frontend/types.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace snipfit::frontend {

namespace {

int numeric_rank(BaseType b) {
  switch (b) {
    case BaseType::char_: return 0;
    case BaseType::int_: return 1;
    case BaseType::long_: return 2;
    case BaseType::float_: return 3;
    case BaseType::double_: return 4;
    default: return -1;
  }
}

bool is_object(const Type& t) { return t.dims == 0 && t.base == BaseType::class_ && t.cls == "java.lang.Object"; }

}  // namespace

bool Type::is_numeric() const noexcept { return dims == 0 && numeric_rank(base) >= 0; }

bool Type::is_reference() const noexcept {
  return dims > 0 || base == BaseType::string_ || base == BaseType::class_ || base == BaseType::null_;
}

std::string Type::to_string() const {
  std::string s;
  switch (base) {
    case BaseType::void_: s = "void"; break;
    case BaseType::int_: s = "int"; break;
    case BaseType::long_: s = "long"; break;
    case BaseType::float_: s = "float"; break;
    case BaseType::double_: s = "double"; break;
    case BaseType::boolean_: s = "boolean"; break;
    case BaseType::char_: s = "char"; break;
    case BaseType::string_: s = "String"; break;
    case BaseType::null_: s = "null"; break;
    case BaseType::class_: {
      const auto dot = cls.rfind('.');
      s = dot == std::string::npos ? cls : cls.substr(dot + 1);
      break;
    }
    case BaseType::unknown: s = "?"; break;
  }
  for (int i = 0; i < dims; ++i) s += "[]";
  return s;
}

std::optional<Type> builtin_type(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, BaseType>, 20> kNames{{
      {"int", BaseType::int_},         {"Integer", BaseType::int_},      {"byte", BaseType::int_},
      {"Byte", BaseType::int_},        {"short", BaseType::int_},        {"Short", BaseType::int_},
      {"long", BaseType::long_},       {"Long", BaseType::long_},        {"float", BaseType::float_},
      {"Float", BaseType::float_},     {"double", BaseType::double_},    {"Double", BaseType::double_},
      {"boolean", BaseType::boolean_}, {"Boolean", BaseType::boolean_}, {"char", BaseType::char_},
      {"Character", BaseType::char_},  {"String", BaseType::string_},    {"void", BaseType::void_},
      {"java.lang.String", BaseType::string_}, {"java.lang.Integer", BaseType::int_},
  }};
  for (const auto& [n, b] : kNames) {
    if (n == name) return Type::of(b);
  }
  return std::nullopt;
}

std::optional<Type> parse_type_name(std::string_view spelled) {
  int dims = 0;
  while (spelled.size() >= 2 && spelled.substr(spelled.size() - 2) == "[]") {
    spelled.remove_suffix(2);
    ++dims;
  }
  while (!spelled.empty() && spelled.back() == ' ') spelled.remove_suffix(1);
  while (!spelled.empty() && spelled.front() == ' ') spelled.remove_prefix(1);
  auto t = builtin_type(spelled);
  if (!t) return std::nullopt;
  if (t->base == BaseType::void_ && dims > 0) return std::nullopt;
  t->dims = dims;
  return t;
}

bool assignable(const Type& to, const Type& from, bool (*is_subclass)(std::string_view, std::string_view)) {
  if (to.is_unknown() || from.is_unknown()) return true;
  if (to.is(BaseType::void_) || from.is(BaseType::void_)) return false;
  if (from.is(BaseType::null_)) return to.is_reference();
  if (is_object(to)) return true;  // references directly, primitives by boxing
  if (to.dims != from.dims) return false;
  if (to.dims > 0) {
    if (to.base != from.base) return false;
    if (to.base != BaseType::class_ || to.cls == from.cls) return true;
    return is_subclass != nullptr && is_subclass(from.cls, to.cls);
  }
  const int rt = numeric_rank(to.base);
  const int rf = numeric_rank(from.base);
  if (rt >= 0 && rf >= 0) return rt >= rf && !(to.base == BaseType::char_ && from.base != BaseType::char_);
  if (to.base != from.base) return false;
  if (to.base != BaseType::class_ || to.cls == from.cls) return true;
  return is_subclass != nullptr && is_subclass(from.cls, to.cls);
}

Type numeric_promotion(const Type& a, const Type& b) {
  if (a.is_unknown() || b.is_unknown()) return Type::unknown();
  const int r = std::max(numeric_rank(a.base), numeric_rank(b.base));
  if (r >= 4) return Type::of(BaseType::double_);
  if (r == 3) return Type::of(BaseType::float_);
  if (r == 2) return Type::of(BaseType::long_);
  return Type::of(BaseType::int_);
}

}  // namespace snipfit::frontend
