#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace snipfit::frontend {

/// Identifies the native implementation the interpreter runs for a library
/// member.
enum class Builtin : std::uint16_t {
  none,
  // java.lang.Integer / Long / Double / Float / Boolean
  parse_int, parse_long, parse_double, parse_float, parse_boolean,
  to_string_static, identity, int_max, int_min, int_sum,
  // java.lang.Character
  char_to_lower, char_to_upper, char_is_digit, char_is_letter, char_is_letter_or_digit,
  char_is_whitespace, char_is_upper, char_is_lower, char_numeric_value,
  // java.lang.String (static)
  string_value_of, string_join, string_format,
  // java.lang.Math
  math_abs, math_max, math_min, math_sqrt, math_pow, math_floor, math_ceil, math_round, math_random,
  // java.lang.System / PrintStream
  system_millis, print_ln, print, print_f,
  // String instance
  str_length, str_char_at, str_substring, str_index_of, str_last_index_of, str_contains, str_equals,
  str_equals_ignore_case, str_is_empty, str_to_lower, str_to_upper, str_trim, str_split, str_replace,
  str_replace_all, str_to_char_array, str_starts_with, str_ends_with, str_concat, str_compare_to,
  str_matches, str_repeat, str_is_blank, str_strip,
  // StringBuilder
  sb_new, sb_append, sb_reverse, sb_to_string, sb_length, sb_char_at, sb_insert, sb_set_char_at,
  sb_delete_char_at,
  // Throwable
  exc_new, exc_get_message, exc_print_stack_trace,
  // java.util.Arrays
  arrays_sort, arrays_to_string, arrays_fill, arrays_copy_of, arrays_copy_of_range, arrays_equals,
  arrays_as_list,
  // java.util.List / ArrayList
  list_new, list_add, list_get, list_set, list_size, list_is_empty, list_contains, list_remove,
  list_clear, list_index_of,
  // java.util.Optional
  opt_of_nullable, opt_of, opt_empty, opt_or_else, opt_is_present, opt_is_empty, opt_get,
  // java.util.Scanner / java.io.BufferedReader
  input_new, input_read,
  // java.util.Random
  random_new, random_next_int, random_next_double,
  // java.text.DecimalFormat
  decimal_format_new, decimal_format_format,
  // third-party
  ints_try_parse, strings_is_null_or_empty, strings_repeat, su_reverse, su_is_blank, su_is_empty,
  su_capitalize,
  // JUnit-style assertions (always in scope)
  assert_equals, assert_true, assert_false, assert_not_null, assert_null,
};

/// Parameter spec strings: a type name ("int", "String", "char[]"), "any",
/// "num" (numeric or char), "array" (any array) or "char|String".
/// Return spec strings: a type name, "void", "unknown", "$0" (type of the
/// first argument), "$num" (numeric promotion of all arguments), "$recv"
/// (receiver type) or "class:<qualified>".
struct LibMethod {
  std::string owner;  // qualified class name
  std::string name;   // "<init>" for constructors
  bool is_static = false;
  std::vector<std::string> params;
  std::string ret;
  Builtin id = Builtin::none;
  bool varargs = false;  // last param repeats zero or more times
};

struct LibField {
  std::string owner;
  std::string name;
  std::string type;
  Builtin id = Builtin::none;
  std::string constant;  // numeric constant payload when id == none
};

struct LibClass {
  std::string qualified;
  bool instantiable = false;
  bool opaque = false;  // no member model: any member resolves with unknown type
  std::vector<std::string> supertypes;
};

class Library {
 public:
  [[nodiscard]] const LibClass* find_class(std::string_view qualified) const;
  /// Classes usable without an import (java.lang), by simple name.
  [[nodiscard]] const LibClass* find_implicit(std::string_view simple) const;
  /// Members declared on `owner` or any of its supertypes.
  [[nodiscard]] std::vector<const LibMethod*> methods(std::string_view owner, std::string_view name) const;
  [[nodiscard]] const LibField* field(std::string_view owner, std::string_view name) const;
  [[nodiscard]] bool is_subclass(std::string_view sub, std::string_view super) const;
  [[nodiscard]] const std::vector<LibMethod>& free_functions() const noexcept { return free_; }

  static const Library& standard();

 private:
  Library();
  void add_class(LibClass c);
  void add_method(LibMethod m);
  void add_field(LibField f);

  std::unordered_map<std::string, LibClass> classes_;
  std::unordered_map<std::string, std::string> implicit_;  // simple -> qualified
  std::unordered_map<std::string, std::vector<LibMethod>> methods_;  // "owner#name"
  std::unordered_map<std::string, LibField> fields_;                 // "owner#name"
  std::vector<LibMethod> free_;                                      // assertions
};

/// Tests whether the library considers `sub` a subtype of `super` (reflexive).
bool library_is_subclass(std::string_view sub, std::string_view super);

}  // namespace snipfit::frontend
