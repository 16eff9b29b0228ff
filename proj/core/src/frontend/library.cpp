#include "snipfit/frontend/library.hpp"

#include <deque>
#include <unordered_set>

namespace snipfit::frontend {

namespace {

std::string key(std::string_view owner, std::string_view name) {
  std::string k(owner);
  k += '#';
  k += name;
  return k;
}

constexpr const char* kLang = "java.lang.";

}  // namespace

void Library::add_class(LibClass c) {
  const std::string q = c.qualified;
  if (q.rfind(kLang, 0) == 0 && q.find('.', 10) == std::string::npos) implicit_[q.substr(10)] = q;
  classes_[q] = std::move(c);
}

void Library::add_method(LibMethod m) {
  if (m.owner.empty()) {
    free_.push_back(std::move(m));
    return;
  }
  methods_[key(m.owner, m.name)].push_back(std::move(m));
}

void Library::add_field(LibField f) { fields_[key(f.owner, f.name)] = std::move(f); }

const LibClass* Library::find_class(std::string_view qualified) const {
  const auto it = classes_.find(std::string(qualified));
  return it == classes_.end() ? nullptr : &it->second;
}

const LibClass* Library::find_implicit(std::string_view simple) const {
  const auto it = implicit_.find(std::string(simple));
  return it == implicit_.end() ? nullptr : find_class(it->second);
}

namespace {

// Breadth-first walk over `start` and its supertypes, ending with Object.
template <typename F>
void walk_supertypes(const std::unordered_map<std::string, LibClass>& classes, std::string_view start, F&& visit) {
  std::deque<std::string> queue{std::string(start)};
  std::unordered_set<std::string> seen;
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert(cur).second) continue;
    if (visit(cur)) return;
    const auto it = classes.find(cur);
    if (it == classes.end()) continue;
    for (const auto& s : it->second.supertypes) queue.push_back(s);
  }
  if (!seen.count("java.lang.Object")) visit(std::string("java.lang.Object"));
}

}  // namespace

std::vector<const LibMethod*> Library::methods(std::string_view owner, std::string_view name) const {
  std::vector<const LibMethod*> out;
  const bool ctor = name == "<init>";
  walk_supertypes(classes_, owner, [&](const std::string& cls) {
    const auto it = methods_.find(key(cls, name));
    if (it != methods_.end()) {
      for (const auto& m : it->second) out.push_back(&m);
    }
    return ctor && !out.empty();  // constructors are inherited only when a class declares none
  });
  return out;
}

const LibField* Library::field(std::string_view owner, std::string_view name) const {
  const LibField* found = nullptr;
  walk_supertypes(classes_, owner, [&](const std::string& cls) {
    const auto it = fields_.find(key(cls, name));
    if (it != fields_.end()) found = &it->second;
    return found != nullptr;
  });
  return found;
}

bool Library::is_subclass(std::string_view sub, std::string_view super) const {
  if (super == "java.lang.Object") return true;
  bool hit = false;
  walk_supertypes(classes_, sub, [&](const std::string& cls) {
    hit = cls == super;
    return hit;
  });
  return hit;
}

bool library_is_subclass(std::string_view sub, std::string_view super) {
  return Library::standard().is_subclass(sub, super);
}

const Library& Library::standard() {
  static const Library lib;
  return lib;
}

Library::Library() {
  using B = Builtin;
  const auto cls = [this](std::string q, bool instantiable, std::vector<std::string> supers = {}, bool opaque = false) {
    add_class(LibClass{std::move(q), instantiable, opaque, std::move(supers)});
  };
  const auto st = [this](std::string owner, std::string name, std::vector<std::string> params, std::string ret, B id,
                         bool varargs = false) {
    add_method(LibMethod{std::move(owner), std::move(name), true, std::move(params), std::move(ret), id, varargs});
  };
  const auto in = [this](std::string owner, std::string name, std::vector<std::string> params, std::string ret, B id,
                         bool varargs = false) {
    add_method(LibMethod{std::move(owner), std::move(name), false, std::move(params), std::move(ret), id, varargs});
  };
  const auto ctor = [this](std::string owner, std::vector<std::string> params, B id) {
    const std::string ret = "class:" + owner;
    add_method(LibMethod{std::move(owner), "<init>", false, std::move(params), ret, id, false});
  };
  const auto fld = [this](std::string owner, std::string name, std::string type, B id, std::string constant = {}) {
    add_field(LibField{std::move(owner), std::move(name), std::move(type), id, std::move(constant)});
  };

  // --- java.lang -------------------------------------------------------------
  cls("java.lang.Object", true);
  in("java.lang.Object", "toString", {}, "String", B::to_string_static);
  in("java.lang.Object", "equals", {"any"}, "boolean", B::str_equals);
  ctor("java.lang.Object", {}, B::exc_new);

  const std::string I = "java.lang.Integer";
  cls(I, false);
  st(I, "parseInt", {"String"}, "int", B::parse_int);
  st(I, "valueOf", {"String"}, "int", B::parse_int);
  st(I, "valueOf", {"int"}, "int", B::identity);
  st(I, "toString", {"int"}, "String", B::to_string_static);
  st(I, "max", {"int", "int"}, "int", B::int_max);
  st(I, "min", {"int", "int"}, "int", B::int_min);
  st(I, "sum", {"int", "int"}, "int", B::int_sum);
  in(I, "intValue", {}, "int", B::identity);
  fld(I, "MAX_VALUE", "int", B::none, "2147483647");
  fld(I, "MIN_VALUE", "int", B::none, "-2147483648");

  const std::string L = "java.lang.Long";
  cls(L, false);
  st(L, "parseLong", {"String"}, "long", B::parse_long);
  st(L, "valueOf", {"String"}, "long", B::parse_long);
  st(L, "toString", {"long"}, "String", B::to_string_static);
  in(L, "longValue", {}, "long", B::identity);
  fld(L, "MAX_VALUE", "long", B::none, "9223372036854775807");
  fld(L, "MIN_VALUE", "long", B::none, "-9223372036854775808");

  const std::string D = "java.lang.Double";
  cls(D, false);
  st(D, "parseDouble", {"String"}, "double", B::parse_double);
  st(D, "valueOf", {"String"}, "double", B::parse_double);
  st(D, "toString", {"double"}, "String", B::to_string_static);
  in(D, "doubleValue", {}, "double", B::identity);

  const std::string F = "java.lang.Float";
  cls(F, false);
  st(F, "parseFloat", {"String"}, "float", B::parse_float);
  st(F, "valueOf", {"String"}, "float", B::parse_float);
  st(F, "toString", {"float"}, "String", B::to_string_static);

  const std::string Bo = "java.lang.Boolean";
  cls(Bo, false);
  st(Bo, "parseBoolean", {"String"}, "boolean", B::parse_boolean);
  st(Bo, "valueOf", {"String"}, "boolean", B::parse_boolean);
  st(Bo, "toString", {"boolean"}, "String", B::to_string_static);

  const std::string C = "java.lang.Character";
  cls(C, false);
  st(C, "toLowerCase", {"char"}, "char", B::char_to_lower);
  st(C, "toUpperCase", {"char"}, "char", B::char_to_upper);
  st(C, "isDigit", {"char"}, "boolean", B::char_is_digit);
  st(C, "isLetter", {"char"}, "boolean", B::char_is_letter);
  st(C, "isLetterOrDigit", {"char"}, "boolean", B::char_is_letter_or_digit);
  st(C, "isWhitespace", {"char"}, "boolean", B::char_is_whitespace);
  st(C, "isUpperCase", {"char"}, "boolean", B::char_is_upper);
  st(C, "isLowerCase", {"char"}, "boolean", B::char_is_lower);
  st(C, "getNumericValue", {"char"}, "int", B::char_numeric_value);
  st(C, "toString", {"char"}, "String", B::to_string_static);
  st(C, "valueOf", {"char"}, "char", B::identity);
  in(C, "charValue", {}, "char", B::identity);

  const std::string S = "java.lang.String";
  cls(S, true, {"java.lang.CharSequence"});
  cls("java.lang.CharSequence", false);
  ctor(S, {}, B::string_value_of);
  ctor(S, {"any"}, B::string_value_of);
  st(S, "valueOf", {"any"}, "String", B::string_value_of);
  st(S, "join", {"String", "any"}, "String", B::string_join, true);
  st(S, "format", {"String", "any"}, "String", B::string_format, true);
  in(S, "length", {}, "int", B::str_length);
  in(S, "charAt", {"int"}, "char", B::str_char_at);
  in(S, "substring", {"int"}, "String", B::str_substring);
  in(S, "substring", {"int", "int"}, "String", B::str_substring);
  in(S, "indexOf", {"char|String"}, "int", B::str_index_of);
  in(S, "indexOf", {"char|String", "int"}, "int", B::str_index_of);
  in(S, "lastIndexOf", {"char|String"}, "int", B::str_last_index_of);
  in(S, "contains", {"String"}, "boolean", B::str_contains);
  in(S, "equals", {"any"}, "boolean", B::str_equals);
  in(S, "equalsIgnoreCase", {"String"}, "boolean", B::str_equals_ignore_case);
  in(S, "isEmpty", {}, "boolean", B::str_is_empty);
  in(S, "toLowerCase", {}, "String", B::str_to_lower);
  in(S, "toUpperCase", {}, "String", B::str_to_upper);
  in(S, "trim", {}, "String", B::str_trim);
  in(S, "strip", {}, "String", B::str_strip);
  in(S, "isBlank", {}, "boolean", B::str_is_blank);
  in(S, "split", {"String"}, "String[]", B::str_split);
  in(S, "replace", {"char|String", "char|String"}, "String", B::str_replace);
  in(S, "replaceAll", {"String", "String"}, "String", B::str_replace_all);
  in(S, "toCharArray", {}, "char[]", B::str_to_char_array);
  in(S, "startsWith", {"String"}, "boolean", B::str_starts_with);
  in(S, "endsWith", {"String"}, "boolean", B::str_ends_with);
  in(S, "concat", {"String"}, "String", B::str_concat);
  in(S, "compareTo", {"String"}, "int", B::str_compare_to);
  in(S, "matches", {"String"}, "boolean", B::str_matches);
  in(S, "repeat", {"int"}, "String", B::str_repeat);

  const std::string M = "java.lang.Math";
  cls(M, false);
  st(M, "abs", {"num"}, "$0", B::math_abs);
  st(M, "max", {"num", "num"}, "$num", B::math_max);
  st(M, "min", {"num", "num"}, "$num", B::math_min);
  st(M, "sqrt", {"num"}, "double", B::math_sqrt);
  st(M, "pow", {"num", "num"}, "double", B::math_pow);
  st(M, "floor", {"num"}, "double", B::math_floor);
  st(M, "ceil", {"num"}, "double", B::math_ceil);
  st(M, "round", {"num"}, "long", B::math_round);
  st(M, "random", {}, "double", B::math_random);
  fld(M, "PI", "double", B::none, "3.141592653589793");
  fld(M, "E", "double", B::none, "2.718281828459045");

  const std::string Sys = "java.lang.System";
  cls(Sys, false);
  st(Sys, "currentTimeMillis", {}, "long", B::system_millis);
  st(Sys, "nanoTime", {}, "long", B::system_millis);
  fld(Sys, "out", "class:java.io.PrintStream", B::none);
  fld(Sys, "err", "class:java.io.PrintStream", B::none);
  fld(Sys, "in", "class:java.io.InputStream", B::none);

  const std::string PS = "java.io.PrintStream";
  cls(PS, false);
  in(PS, "println", {}, "void", B::print_ln);
  in(PS, "println", {"any"}, "void", B::print_ln);
  in(PS, "print", {"any"}, "void", B::print);
  in(PS, "printf", {"String", "any"}, "void", B::print_f, true);
  cls("java.io.InputStream", false);

  const std::string SB = "java.lang.StringBuilder";
  cls(SB, true, {"java.lang.CharSequence"});
  ctor(SB, {}, B::sb_new);
  ctor(SB, {"any"}, B::sb_new);
  in(SB, "append", {"any"}, "$recv", B::sb_append);
  in(SB, "reverse", {}, "$recv", B::sb_reverse);
  in(SB, "toString", {}, "String", B::sb_to_string);
  in(SB, "length", {}, "int", B::sb_length);
  in(SB, "charAt", {"int"}, "char", B::sb_char_at);
  in(SB, "insert", {"int", "any"}, "$recv", B::sb_insert);
  in(SB, "setCharAt", {"int", "char"}, "void", B::sb_set_char_at);
  in(SB, "deleteCharAt", {"int"}, "$recv", B::sb_delete_char_at);

  // Throwable hierarchy
  const std::string T = "java.lang.Throwable";
  cls(T, true);
  ctor(T, {}, B::exc_new);
  ctor(T, {"String"}, B::exc_new);
  in(T, "getMessage", {}, "String", B::exc_get_message);
  in(T, "printStackTrace", {}, "void", B::exc_print_stack_trace);
  cls("java.lang.Exception", true, {T});
  cls("java.lang.Error", true, {T});
  cls("java.lang.StackOverflowError", true, {"java.lang.Error"});
  cls("java.lang.OutOfMemoryError", true, {"java.lang.Error"});
  cls("java.lang.AssertionError", true, {"java.lang.Error"});
  cls("java.lang.InterruptedException", true, {"java.lang.Exception"});
  cls("java.lang.RuntimeException", true, {"java.lang.Exception"});
  for (const char* n : {"IllegalArgumentException", "IllegalStateException", "ArithmeticException",
                        "NullPointerException", "IndexOutOfBoundsException", "UnsupportedOperationException",
                        "ClassCastException", "NegativeArraySizeException"}) {
    cls(std::string(kLang) + n, true, {"java.lang.RuntimeException"});
  }
  cls("java.lang.NumberFormatException", true, {"java.lang.IllegalArgumentException"});
  cls("java.lang.ArrayIndexOutOfBoundsException", true, {"java.lang.IndexOutOfBoundsException"});
  cls("java.lang.StringIndexOutOfBoundsException", true, {"java.lang.IndexOutOfBoundsException"});
  cls("java.util.NoSuchElementException", true, {"java.lang.RuntimeException"});
  cls("java.io.IOException", true, {"java.lang.Exception"});

  // --- java.util ---------------------------------------------------------------
  const std::string A = "java.util.Arrays";
  cls(A, false);
  st(A, "sort", {"array"}, "void", B::arrays_sort);
  st(A, "toString", {"array"}, "String", B::arrays_to_string);
  st(A, "fill", {"array", "any"}, "void", B::arrays_fill);
  st(A, "copyOf", {"array", "int"}, "$0", B::arrays_copy_of);
  st(A, "copyOfRange", {"array", "int", "int"}, "$0", B::arrays_copy_of_range);
  st(A, "equals", {"array", "array"}, "boolean", B::arrays_equals);
  st(A, "asList", {"any"}, "class:java.util.List", B::arrays_as_list, true);

  const std::string Li = "java.util.List";
  cls(Li, false);
  in(Li, "add", {"any"}, "boolean", B::list_add);
  in(Li, "get", {"int"}, "unknown", B::list_get);
  in(Li, "set", {"int", "any"}, "unknown", B::list_set);
  in(Li, "size", {}, "int", B::list_size);
  in(Li, "isEmpty", {}, "boolean", B::list_is_empty);
  in(Li, "contains", {"any"}, "boolean", B::list_contains);
  in(Li, "remove", {"int"}, "unknown", B::list_remove);
  in(Li, "clear", {}, "void", B::list_clear);
  in(Li, "indexOf", {"any"}, "int", B::list_index_of);
  const std::string AL = "java.util.ArrayList";
  cls(AL, true, {Li});
  ctor(AL, {}, B::list_new);
  ctor(AL, {"int"}, B::list_new);

  const std::string O = "java.util.Optional";
  cls(O, false);
  st(O, "ofNullable", {"any"}, "class:java.util.Optional", B::opt_of_nullable);
  st(O, "of", {"any"}, "class:java.util.Optional", B::opt_of);
  st(O, "empty", {}, "class:java.util.Optional", B::opt_empty);
  in(O, "orElse", {"any"}, "unknown", B::opt_or_else);
  in(O, "isPresent", {}, "boolean", B::opt_is_present);
  in(O, "isEmpty", {}, "boolean", B::opt_is_empty);
  in(O, "get", {}, "unknown", B::opt_get);

  const std::string Sc = "java.util.Scanner";
  cls(Sc, true);
  ctor(Sc, {"any"}, B::input_new);
  in(Sc, "nextLine", {}, "String", B::input_read);
  in(Sc, "next", {}, "String", B::input_read);

  const std::string R = "java.util.Random";
  cls(R, true);
  ctor(R, {}, B::random_new);
  ctor(R, {"long"}, B::random_new);
  in(R, "nextInt", {}, "int", B::random_next_int);
  in(R, "nextInt", {"int"}, "int", B::random_next_int);
  in(R, "nextDouble", {}, "double", B::random_next_double);

  // --- java.io / java.text -----------------------------------------------------
  const std::string BR = "java.io.BufferedReader";
  cls(BR, true);
  ctor(BR, {"any"}, B::input_new);
  in(BR, "readLine", {}, "String", B::input_read);
  const std::string ISR = "java.io.InputStreamReader";
  cls(ISR, true);
  ctor(ISR, {"any"}, B::input_new);

  const std::string DF = "java.text.DecimalFormat";
  cls(DF, true);
  ctor(DF, {"String"}, B::decimal_format_new);
  in(DF, "format", {"num"}, "String", B::decimal_format_format);

  // --- third-party -------------------------------------------------------------
  const std::string Ints = "com.google.common.primitives.Ints";
  cls(Ints, false);
  st(Ints, "tryParse", {"String"}, "unknown", B::ints_try_parse);
  const std::string Strs = "com.google.common.base.Strings";
  cls(Strs, false);
  st(Strs, "isNullOrEmpty", {"String"}, "boolean", B::strings_is_null_or_empty);
  st(Strs, "repeat", {"String", "int"}, "String", B::strings_repeat);
  const std::string SU = "org.apache.commons.lang3.StringUtils";
  cls(SU, false);
  st(SU, "reverse", {"String"}, "String", B::su_reverse);
  st(SU, "isBlank", {"String"}, "boolean", B::su_is_blank);
  st(SU, "isEmpty", {"String"}, "boolean", B::su_is_empty);
  st(SU, "capitalize", {"String"}, "String", B::su_capitalize);

  // Name-colliding packages without a member model.
  for (const char* q : {"com.sun.tools.javac.util.List", "com.sun.tools.javac.util.Pair", "org.acme.util.List",
                        "org.acme.util.Optional", "org.acme.util.StringUtils"}) {
    cls(q, true, {}, true);
  }

  // --- assertions (always in scope) ----------------------------------------------
  st("", "assertEquals", {"any", "any"}, "void", B::assert_equals);
  st("", "assertEquals", {"any", "any", "num"}, "void", B::assert_equals);
  st("", "assertTrue", {"boolean"}, "void", B::assert_true);
  st("", "assertFalse", {"boolean"}, "void", B::assert_false);
  st("", "assertNotNull", {"any"}, "void", B::assert_not_null);
  st("", "assertNull", {"any"}, "void", B::assert_null);
}

}  // namespace snipfit::frontend
