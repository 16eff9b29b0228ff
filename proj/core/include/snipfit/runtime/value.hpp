#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "snipfit/frontend/types.hpp"

namespace snipfit::runtime {

struct ArrayObj;
struct Object;

using ArrayRef = std::shared_ptr<ArrayObj>;
using ObjectRef = std::shared_ptr<Object>;

/// A Mini-J runtime value. `std::monostate` is null. Strings are immutable
/// and stored by value.
using Value = std::variant<std::monostate, std::int32_t, std::int64_t, float, double, bool, char, std::string,
                           ArrayRef, ObjectRef>;

struct ArrayObj {
  frontend::Type elem;  // element type
  std::vector<Value> items;
  std::uint64_t id = 0;
};

/// Library object: StringBuilder, list, Optional, exception, Random, etc.
struct Object {
  std::string cls;  // qualified class name
  std::string text;  // builder contents, exception message, format pattern
  bool has_text = false;
  std::vector<Value> items;  // list elements; Optional payload in items[0]
  std::uint64_t state = 0;   // Random state
  std::uint64_t id = 0;
};

[[nodiscard]] inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
[[nodiscard]] bool is_numeric(const Value& v);  // int, long, float, double, char
[[nodiscard]] bool is_integral(const Value& v);  // int, long, char
[[nodiscard]] double as_double(const Value& v);
[[nodiscard]] std::int64_t as_long(const Value& v);

/// Java spelling of Double.toString / Float.toString.
std::string format_double(double d);
std::string format_float(float f);

/// String conversion as performed by `+` concatenation and println.
std::string to_java_string(const Value& v);

/// Deep equality used by assertEquals: numbers by value (floating point
/// within `tolerance`), strings by content, arrays and lists element-wise.
bool structurally_equal(const Value& a, const Value& b, double tolerance = 1e-9);

/// Default value of a field or array element of type `t`.
Value default_value(const frontend::Type& t);

/// Converts a value for storage in a slot of static type `t` (widening and
/// compound-assignment narrowing). Unknown targets keep the value as is.
Value coerce(const Value& v, const frontend::Type& t);

/// Runtime type of a value for overload selection; null maps to null_.
frontend::Type type_of(const Value& v);

}  // namespace snipfit::runtime
