#include "snipfit/runtime/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "snipfit/frontend/library.hpp"

namespace snipfit::runtime {

using frontend::BaseType;
using frontend::Type;

bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int32_t>(v) || std::holds_alternative<std::int64_t>(v) ||
         std::holds_alternative<float>(v) || std::holds_alternative<double>(v) || std::holds_alternative<char>(v);
}

bool is_integral(const Value& v) {
  return std::holds_alternative<std::int32_t>(v) || std::holds_alternative<std::int64_t>(v) ||
         std::holds_alternative<char>(v);
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int32_t>(&v)) return *i;
  if (const auto* l = std::get_if<std::int64_t>(&v)) return static_cast<double>(*l);
  if (const auto* f = std::get_if<float>(&v)) return *f;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* c = std::get_if<char>(&v)) return static_cast<unsigned char>(*c);
  return 0.0;
}

namespace {

template <typename Int>
Int java_trunc(double d) {
  if (std::isnan(d)) return 0;
  if (d >= static_cast<double>(std::numeric_limits<Int>::max())) return std::numeric_limits<Int>::max();
  if (d <= static_cast<double>(std::numeric_limits<Int>::min())) return std::numeric_limits<Int>::min();
  return static_cast<Int>(d);
}

}  // namespace

std::int64_t as_long(const Value& v) {
  if (const auto* i = std::get_if<std::int32_t>(&v)) return *i;
  if (const auto* l = std::get_if<std::int64_t>(&v)) return *l;
  if (const auto* c = std::get_if<char>(&v)) return static_cast<unsigned char>(*c);
  if (std::holds_alternative<float>(v) || std::holds_alternative<double>(v)) return java_trunc<std::int64_t>(as_double(v));
  return 0;
}

namespace {

template <typename F>
std::string format_floating(F value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Infinity" : "-Infinity";
  if (value == 0) return std::signbit(value) ? "-0.0" : "0.0";
  char buf[64];
  const F mag = std::fabs(value);
  if (mag >= F(1e-3) && mag < F(1e7)) {
    auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    std::string s(buf, r.ptr);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
  }
  auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  std::string s(buf, r.ptr);
  const auto e = s.find('e');
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  if (mant.find('.') == std::string::npos) mant += ".0";
  bool neg = false;
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
    neg = exp[0] == '-';
    exp.erase(0, 1);
  }
  while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
  return mant + "E" + (neg ? "-" : "") + exp;
}

std::string hex_id(std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(0x1b6d3586ull + id * 0x9e3ull));
  return buf;
}

std::string array_code(const Type& elem) {
  std::string prefix(static_cast<std::size_t>(elem.dims) + 1, '[');
  switch (elem.base) {
    case BaseType::int_: return prefix + "I";
    case BaseType::long_: return prefix + "J";
    case BaseType::float_: return prefix + "F";
    case BaseType::double_: return prefix + "D";
    case BaseType::boolean_: return prefix + "Z";
    case BaseType::char_: return prefix + "C";
    case BaseType::string_: return prefix + "Ljava.lang.String;";
    case BaseType::class_: return prefix + "L" + elem.cls + ";";
    default: return prefix + "Ljava.lang.Object;";
  }
}

bool is_list(const Object& o) { return o.cls == "java.util.ArrayList" || o.cls == "java.util.List"; }

}  // namespace

std::string format_double(double d) { return format_floating(d); }
std::string format_float(float f) { return format_floating(f); }

std::string to_java_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(std::int32_t i) const { return std::to_string(i); }
    std::string operator()(std::int64_t l) const { return std::to_string(l); }
    std::string operator()(float f) const { return format_float(f); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(char c) const { return std::string(1, c); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const ArrayRef& a) const { return array_code(a->elem) + "@" + hex_id(a->id); }
    std::string operator()(const ObjectRef& o) const {
      if (o->cls == "java.lang.StringBuilder") return o->text;
      if (is_list(*o)) {
        std::string s = "[";
        for (std::size_t i = 0; i < o->items.size(); ++i) {
          if (i > 0) s += ", ";
          s += to_java_string(o->items[i]);
        }
        return s + "]";
      }
      if (o->cls == "java.util.Optional") {
        return o->items.empty() ? "Optional.empty" : "Optional[" + to_java_string(o->items[0]) + "]";
      }
      if (frontend::library_is_subclass(o->cls, "java.lang.Throwable")) {
        return o->has_text ? o->cls + ": " + o->text : o->cls;
      }
      return o->cls + "@" + hex_id(o->id);
    }
  };
  return std::visit(Visitor{}, v);
}

bool structurally_equal(const Value& a, const Value& b, double tolerance) {
  if (is_null(a) || is_null(b)) return is_null(a) && is_null(b);
  if (is_numeric(a) && is_numeric(b)) {
    if (is_integral(a) && is_integral(b)) return as_long(a) == as_long(b);
    const double x = as_double(a);
    const double y = as_double(b);
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    return x == y || std::fabs(x - y) <= tolerance;
  }
  if (a.index() != b.index()) return false;
  if (const auto* s = std::get_if<std::string>(&a)) return *s == std::get<std::string>(b);
  if (const auto* x = std::get_if<bool>(&a)) return *x == std::get<bool>(b);
  if (const auto* arr = std::get_if<ArrayRef>(&a)) {
    const auto& other = std::get<ArrayRef>(b);
    if (arr->get() == other.get()) return true;
    if ((*arr)->items.size() != other->items.size()) return false;
    for (std::size_t i = 0; i < other->items.size(); ++i) {
      if (!structurally_equal((*arr)->items[i], other->items[i], tolerance)) return false;
    }
    return true;
  }
  const auto& x = std::get<ObjectRef>(a);
  const auto& y = std::get<ObjectRef>(b);
  if (x.get() == y.get()) return true;
  const bool seq = (is_list(*x) && is_list(*y)) || (x->cls == "java.util.Optional" && y->cls == x->cls);
  if (!seq || x->items.size() != y->items.size()) return false;
  for (std::size_t i = 0; i < x->items.size(); ++i) {
    if (!structurally_equal(x->items[i], y->items[i], tolerance)) return false;
  }
  return true;
}

Value default_value(const Type& t) {
  if (t.dims > 0) return std::monostate{};
  switch (t.base) {
    case BaseType::int_: return std::int32_t{0};
    case BaseType::long_: return std::int64_t{0};
    case BaseType::float_: return 0.0F;
    case BaseType::double_: return 0.0;
    case BaseType::boolean_: return false;
    case BaseType::char_: return '\0';
    default: return std::monostate{};
  }
}

Value coerce(const Value& v, const Type& t) {
  if (t.dims > 0 || !is_numeric(v)) return v;
  switch (t.base) {
    case BaseType::int_:
      if (std::holds_alternative<float>(v) || std::holds_alternative<double>(v)) {
        return java_trunc<std::int32_t>(as_double(v));
      }
      return static_cast<std::int32_t>(static_cast<std::uint32_t>(as_long(v)));
    case BaseType::long_: return as_long(v);
    case BaseType::float_: return static_cast<float>(as_double(v));
    case BaseType::double_: return as_double(v);
    case BaseType::char_: return static_cast<char>(static_cast<unsigned char>(as_long(v) & 0xFF));
    default: return v;
  }
}

Type type_of(const Value& v) {
  struct Visitor {
    Type operator()(std::monostate) const { return Type::of(BaseType::null_); }
    Type operator()(std::int32_t) const { return Type::of(BaseType::int_); }
    Type operator()(std::int64_t) const { return Type::of(BaseType::long_); }
    Type operator()(float) const { return Type::of(BaseType::float_); }
    Type operator()(double) const { return Type::of(BaseType::double_); }
    Type operator()(bool) const { return Type::of(BaseType::boolean_); }
    Type operator()(char) const { return Type::of(BaseType::char_); }
    Type operator()(const std::string&) const { return Type::of(BaseType::string_); }
    Type operator()(const ArrayRef& a) const { return a->elem.array_of(); }
    Type operator()(const ObjectRef& o) const { return Type::klass(o->cls); }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace snipfit::runtime
