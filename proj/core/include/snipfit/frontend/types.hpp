#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace snipfit::frontend {

enum class BaseType : std::uint8_t {
  void_,
  int_,
  long_,
  float_,
  double_,
  boolean_,
  char_,
  string_,
  null_,
  class_,   // library or user class; `cls` holds the qualified name
  unknown,  // produced by unresolved names and opaque library members; compatible with everything
};

/// Static type of a Mini-J expression.
struct Type {
  BaseType base = BaseType::unknown;
  int dims = 0;
  std::string cls;

  static Type of(BaseType b) { return Type{b, 0, {}}; }
  static Type klass(std::string qualified) { return Type{BaseType::class_, 0, std::move(qualified)}; }
  static Type unknown() { return Type{}; }
  [[nodiscard]] Type array_of() const { return Type{base, dims + 1, cls}; }
  [[nodiscard]] Type element() const { return Type{base, dims > 0 ? dims - 1 : 0, cls}; }

  [[nodiscard]] bool is_array() const noexcept { return dims > 0; }
  [[nodiscard]] bool is_unknown() const noexcept { return base == BaseType::unknown; }
  [[nodiscard]] bool is(BaseType b) const noexcept { return dims == 0 && base == b; }
  [[nodiscard]] bool is_numeric() const noexcept;  // includes char
  [[nodiscard]] bool is_reference() const noexcept;
  /// Java spelling with simple class names, e.g. "String[]" or "Optional".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Type&, const Type&) = default;
};

/// Builtin type names: primitives, `String`, `void`, and wrapper names
/// (Integer, Character, ...) which Mini-J treats as their primitive.
std::optional<Type> builtin_type(std::string_view name);

/// Parses a signature type name such as "int", "String[]" or "char".
std::optional<Type> parse_type_name(std::string_view spelled);

/// Widening conversions only, plus null to references and unknown anywhere.
/// Class subtyping is decided by the caller-supplied predicate.
bool assignable(const Type& to, const Type& from,
                bool (*is_subclass)(std::string_view sub, std::string_view super) = nullptr);

Type numeric_promotion(const Type& a, const Type& b);

}  // namespace snipfit::frontend
