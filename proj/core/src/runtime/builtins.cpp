#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <regex>

#include "internal.hpp"

namespace snipfit::runtime::detail {

using frontend::BaseType;
using frontend::Builtin;
using frontend::Type;

std::uint64_t random_seed(std::int64_t seed) {
  return (static_cast<std::uint64_t>(seed) ^ 0x5DEECE66DULL) & ((1ULL << 48) - 1);
}

std::int32_t random_next(std::uint64_t& state, int bits) {
  state = (state * 0x5DEECE66DULL + 0xBULL) & ((1ULL << 48) - 1);
  return static_cast<std::int32_t>(static_cast<std::int64_t>(state) >> (48 - bits));
}

double random_next_double(std::uint64_t& state) {
  const auto hi = static_cast<std::int64_t>(random_next(state, 26));
  const auto lo = static_cast<std::int64_t>(random_next(state, 27));
  return static_cast<double>((hi << 27) + lo) * 0x1.0p-53;
}

namespace {

constexpr const char* kNpe = "java.lang.NullPointerException";
constexpr const char* kNfe = "java.lang.NumberFormatException";
constexpr const char* kSioobe = "java.lang.StringIndexOutOfBoundsException";
constexpr const char* kIoobe = "java.lang.IndexOutOfBoundsException";
constexpr const char* kIae = "java.lang.IllegalArgumentException";

class Impl {
 public:
  Impl(BuiltinContext& ctx, const frontend::LibMethod& m, const std::string& owner, Value* recv,
       std::vector<Value>& args)
      : ctx_(ctx), m_(m), owner_(owner), recv_(recv), args_(args) {}

  Value run();

 private:
  Value& arg(std::size_t i) {
    if (i >= args_.size()) throw Fault{"missing argument for " + m_.name};
    return args_[i];
  }

  const std::string& str(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (is_null(v)) ctx_.raise(kNpe, "");
    throw Fault{"expected a String in " + m_.name};
  }

  std::int32_t int_arg(std::size_t i) { return static_cast<std::int32_t>(as_long(arg(i))); }

  char char_arg(std::size_t i) {
    const Value& v = arg(i);
    if (const auto* c = std::get_if<char>(&v)) return *c;
    return static_cast<char>(as_long(v) & 0xFF);
  }

  const std::string& self_str() { return str(*recv_); }

  Object& self_obj() {
    if (auto* o = std::get_if<ObjectRef>(recv_)) return **o;
    if (is_null(*recv_)) ctx_.raise(kNpe, "");
    throw Fault{"expected an object receiver for " + m_.name};
  }

  ArrayObj& array(const Value& v) {
    if (const auto* a = std::get_if<ArrayRef>(&v)) return **a;
    if (is_null(v)) ctx_.raise(kNpe, "");
    throw Fault{"expected an array in " + m_.name};
  }

  void check_size(std::size_t n) {
    if (n > kMaxAllocation) ctx_.raise("java.lang.OutOfMemoryError", "Java heap space");
    ctx_.charge(1 + n / 64);
  }

  std::string make_string(std::string s) {
    check_size(s.size());
    return s;
  }

  std::regex compile_regex(const std::string& pattern) {
    std::regex re;
    try {
      re.assign(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error&) {
      ctx_.raise("java.lang.IllegalArgumentException", "invalid regular expression: " + pattern);
    }
    return re;
  }

  Value parse_int_like(bool is_long) {
    const Value& v = arg(0);
    if (is_null(v)) ctx_.raise(kNfe, is_long ? "null" : "Cannot parse null string: null");
    const std::string& s = str(v);
    std::string_view body(s);
    bool neg = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
      neg = body[0] == '-';
      body.remove_prefix(1);
    }
    const auto fail = [&]() { ctx_.raise(kNfe, "For input string: \"" + s + "\""); };
    if (body.empty() || !std::all_of(body.begin(), body.end(), [](char c) { return c >= '0' && c <= '9'; })) fail();
    std::uint64_t mag = 0;
    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), mag);
    if (ec != std::errc() || p != body.data() + body.size()) fail();
    const std::uint64_t limit = is_long ? (neg ? 9223372036854775808ULL : 9223372036854775807ULL)
                                        : (neg ? 2147483648ULL : 2147483647ULL);
    if (mag > limit) fail();
    const auto value = neg ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
    if (is_long) return value;
    return static_cast<std::int32_t>(value);
  }

  double parse_floating() {
    const Value& v = arg(0);
    if (is_null(v)) ctx_.raise(kNpe, "");
    const std::string& s = str(v);
    std::string t = s;
    while (!t.empty() && static_cast<unsigned char>(t.back()) <= ' ') t.pop_back();
    std::size_t b = 0;
    while (b < t.size() && static_cast<unsigned char>(t[b]) <= ' ') ++b;
    t = t.substr(b);
    if (!t.empty() && (t.back() == 'd' || t.back() == 'D' || t.back() == 'f' || t.back() == 'F')) t.pop_back();
    std::string_view body(t);
    bool neg = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
      neg = body[0] == '-';
      body.remove_prefix(1);
    }
    double out = 0;
    if (body == "Infinity") {
      out = INFINITY;
    } else if (body == "NaN") {
      out = NAN;
    } else {
      const bool ok_chars = !body.empty() && std::all_of(body.begin(), body.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || c == '-' || c == '+';
      });
      auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
      if (!ok_chars || ec != std::errc() || p != body.data() + body.size()) {
        ctx_.raise(kNfe, s.empty() ? "empty String" : "For input string: \"" + s + "\"");
      }
    }
    return neg ? -out : out;
  }

  std::string format(const std::string& fmt, std::size_t first_arg);
  std::string decimal_format(const std::string& pattern, double value);
  Value split(const std::string& s, const std::string& regex);
  bool java_equals(const Value& a, const Value& b);
  Value list_arg_index(std::int32_t i, std::size_t size) {
    if (i < 0 || static_cast<std::size_t>(i) >= size) {
      ctx_.raise(kIoobe, "Index " + std::to_string(i) + " out of bounds for length " + std::to_string(size));
    }
    return {};
  }
  int compare_values(const Value& a, const Value& b);

  BuiltinContext& ctx_;
  const frontend::LibMethod& m_;
  const std::string& owner_;
  Value* recv_;
  std::vector<Value>& args_;
};

bool Impl::java_equals(const Value& a, const Value& b) {
  if (is_null(a) || is_null(b)) return is_null(a) && is_null(b);
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<ArrayRef>(a)) return std::get<ArrayRef>(a) == std::get<ArrayRef>(b);
  if (const auto* o = std::get_if<ObjectRef>(&a)) {
    const auto& p = std::get<ObjectRef>(b);
    if (*o == p) return true;
    if ((*o)->cls == "java.util.ArrayList" || (*o)->cls == "java.util.Optional") return structurally_equal(a, b, 0.0);
    return false;
  }
  return structurally_equal(a, b, 0.0);
}

int Impl::compare_values(const Value& a, const Value& b) {
  if (is_numeric(a) && is_numeric(b)) {
    const double x = as_double(a);
    const double y = as_double(b);
    if (is_integral(a) && is_integral(b)) return as_long(a) < as_long(b) ? -1 : (as_long(a) > as_long(b) ? 1 : 0);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b)) {
    return std::get<std::string>(a).compare(std::get<std::string>(b));
  }
  if (std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b)) {
    return static_cast<int>(std::get<bool>(a)) - static_cast<int>(std::get<bool>(b));
  }
  if (is_null(a) || is_null(b)) ctx_.raise(kNpe, "");
  ctx_.raise("java.lang.ClassCastException", "values are not comparable");
  return 0;
}

Value Impl::split(const std::string& s, const std::string& regex) {
  std::vector<std::string> parts;
  const bool literal_char = regex.size() == 1 && std::string(".$|()[{^?*+\\").find(regex[0]) == std::string::npos;
  const bool escaped_char = regex.size() == 2 && regex[0] == '\\' && !std::isalnum(static_cast<unsigned char>(regex[1]));
  if (literal_char || escaped_char) {
    const char sep = regex.back();
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == sep) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.empty()) {
      parts.push_back(s);
    } else {
      parts.push_back(s.substr(start));
    }
  } else {
    const auto re = compile_regex(regex);
    std::size_t index = 0;
    bool matched = false;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
      ctx_.charge(1);
      const auto start = static_cast<std::size_t>(it->position(0));
      const auto len = static_cast<std::size_t>(it->length(0));
      if (index == 0 && start == 0 && len == 0) continue;
      if (len == 0 && start >= s.size()) continue;
      matched = true;
      parts.push_back(s.substr(index, start - index));
      index = start + len;
    }
    if (!matched) {
      parts.assign(1, s);
    } else {
      parts.push_back(s.substr(index));
    }
  }
  if (parts.size() > 1 || (parts.size() == 1 && !s.empty())) {
    while (parts.size() > 1 && parts.back().empty()) parts.pop_back();
    if (parts.size() == 1 && parts[0].empty() && !s.empty()) parts.clear();
  }
  auto arr = ctx_.new_array(Type::of(BaseType::string_), parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) arr->items[i] = std::move(parts[i]);
  return arr;
}

std::string Impl::format(const std::string& fmt, std::size_t next) {
  std::string out;
  for (std::size_t i = 0; i < fmt.size(); ++i) {
    if (fmt[i] != '%') {
      out.push_back(fmt[i]);
      continue;
    }
    std::size_t j = i + 1;
    std::string flags;
    while (j < fmt.size() && std::string("-0,+ #").find(fmt[j]) != std::string::npos) flags.push_back(fmt[j++]);
    int width = 0;
    while (j < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[j]))) width = width * 10 + (fmt[j++] - '0');
    int prec = -1;
    if (j < fmt.size() && fmt[j] == '.') {
      prec = 0;
      ++j;
      while (j < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[j]))) prec = prec * 10 + (fmt[j++] - '0');
    }
    if (j >= fmt.size()) ctx_.raise("java.util.UnknownFormatConversionException", "Conversion = '%'");
    const char conv = fmt[j];
    i = j;
    if (conv == 'n') {
      out.push_back('\n');
      continue;
    }
    if (conv == '%') {
      out.push_back('%');
      continue;
    }
    if (next >= args_.size()) ctx_.raise(kIae, "Format specifier '%" + std::string(1, conv) + "'");
    const Value& v = args_[next++];
    std::string piece;
    const bool left = flags.find('-') != std::string::npos;
    const bool zero = flags.find('0') != std::string::npos;
    const bool group = flags.find(',') != std::string::npos;
    const bool plus = flags.find('+') != std::string::npos;
    const auto group_digits = [](std::string digits) {
      std::string sign;
      if (!digits.empty() && digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
      }
      std::string g;
      const int n = static_cast<int>(digits.size());
      for (int k = 0; k < n; ++k) {
        if (k > 0 && (n - k) % 3 == 0) g.push_back(',');
        g.push_back(digits[static_cast<std::size_t>(k)]);
      }
      return sign + g;
    };
    switch (conv) {
      case 'd': {
        if (!is_integral(v) || std::holds_alternative<char>(v)) {
          ctx_.raise(kIae, "d != " + type_of(v).to_string());
        }
        piece = std::to_string(as_long(v));
        if (group) piece = group_digits(piece);
        if (plus && as_long(v) >= 0) piece = "+" + piece;
        break;
      }
      case 'x':
      case 'X': {
        if (!is_integral(v)) ctx_.raise(kIae, "x != " + type_of(v).to_string());
        char buf[32];
        if (std::holds_alternative<std::int64_t>(v)) {
          std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(as_long(v)));
        } else {
          std::snprintf(buf, sizeof buf, "%x", static_cast<unsigned>(static_cast<std::uint32_t>(as_long(v))));
        }
        piece = buf;
        if (conv == 'X') std::transform(piece.begin(), piece.end(), piece.begin(), ::toupper);
        break;
      }
      case 'f':
      case 'e': {
        if (!is_numeric(v) || is_integral(v)) ctx_.raise(kIae, std::string(1, conv) + " != " + type_of(v).to_string());
        char buf[512];
        std::snprintf(buf, sizeof buf, conv == 'f' ? "%.*f" : "%.*e", prec < 0 ? 6 : std::min(prec, 100), as_double(v));
        piece = buf;
        if (group && conv == 'f') {
          const auto dot = piece.find('.');
          piece = group_digits(piece.substr(0, dot)) + (dot == std::string::npos ? "" : piece.substr(dot));
        }
        if (plus && as_double(v) >= 0) piece = "+" + piece;
        break;
      }
      case 'c':
        if (!std::holds_alternative<char>(v) && !std::holds_alternative<std::int32_t>(v)) {
          ctx_.raise(kIae, "c != " + type_of(v).to_string());
        }
        piece = std::string(1, static_cast<char>(as_long(v)));
        break;
      case 'b':
        piece = is_null(v) ? "false" : (std::holds_alternative<bool>(v) ? to_java_string(v) : "true");
        break;
      case 's':
      case 'S':
        piece = to_java_string(v);
        if (prec >= 0 && piece.size() > static_cast<std::size_t>(prec)) piece.resize(static_cast<std::size_t>(prec));
        if (conv == 'S') std::transform(piece.begin(), piece.end(), piece.begin(), ::toupper);
        break;
      default:
        ctx_.raise("java.util.UnknownFormatConversionException", "Conversion = '" + std::string(1, conv) + "'");
    }
    if (static_cast<int>(piece.size()) < width) {
      const auto pad = static_cast<std::size_t>(width) - piece.size();
      if (left) {
        piece.append(pad, ' ');
      } else if (zero && conv != 's') {
        const std::size_t at = (!piece.empty() && (piece[0] == '-' || piece[0] == '+')) ? 1 : 0;
        piece.insert(at, pad, '0');
      } else {
        piece.insert(0, pad, ' ');
      }
    }
    out += piece;
    check_size(out.size());
  }
  return out;
}

std::string Impl::decimal_format(const std::string& pattern, double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "\xE2\x88\x9E" : "-\xE2\x88\x9E";
  const auto semi = pattern.find(';');
  const std::string pat = pattern.substr(0, semi);
  const auto dot = pat.find('.');
  const std::string int_part = pat.substr(0, dot);
  const std::string frac_part = dot == std::string::npos ? "" : pat.substr(dot + 1);
  int min_int = 0;
  for (char c : int_part) min_int += c == '0' ? 1 : 0;
  int min_frac = 0;
  int max_frac = 0;
  for (char c : frac_part) {
    if (c == '0') ++min_frac;
    if (c == '0' || c == '#') ++max_frac;
  }
  const bool grouping = int_part.find(',') != std::string::npos;
  int group_size = 3;
  if (grouping) group_size = static_cast<int>(int_part.size() - int_part.rfind(',') - 1);
  std::string prefix;
  std::string suffix;
  for (char c : pat) {
    if (c == '#' || c == '0' || c == ',' || c == '.') break;
    prefix.push_back(c);
  }
  for (auto it = pat.rbegin(); it != pat.rend(); ++it) {
    if (*it == '#' || *it == '0' || *it == ',' || *it == '.') break;
    suffix.insert(suffix.begin(), *it);
  }
  const bool percent = pat.find('%') != std::string::npos;
  if (percent) value *= 100;

  // Round half-even at max_frac digits.
  const double scale = std::pow(10.0, max_frac);
  double scaled = std::fabs(value) * scale;
  double rounded = std::nearbyint(scaled);
  const double diff = scaled - std::floor(scaled);
  if (std::fabs(diff - 0.5) < 1e-9) {
    const double fl = std::floor(scaled);
    rounded = std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1;
  }
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.0f", rounded);
  std::string digits = buf;
  while (static_cast<int>(digits.size()) <= max_frac) digits.insert(digits.begin(), '0');
  std::string ip = digits.substr(0, digits.size() - static_cast<std::size_t>(max_frac));
  std::string fp = digits.substr(digits.size() - static_cast<std::size_t>(max_frac));
  while (static_cast<int>(fp.size()) > min_frac && !fp.empty() && fp.back() == '0') fp.pop_back();
  while (ip.size() > 1 && ip[0] == '0') ip.erase(0, 1);
  if (ip == "0" && min_int == 0) ip.clear();
  while (static_cast<int>(ip.size()) < min_int) ip.insert(ip.begin(), '0');
  if (grouping && group_size > 0) {
    std::string g;
    const int n = static_cast<int>(ip.size());
    for (int k = 0; k < n; ++k) {
      if (k > 0 && (n - k) % group_size == 0) g.push_back(',');
      g.push_back(ip[static_cast<std::size_t>(k)]);
    }
    ip = g;
  }
  std::string out = ip;
  if (!fp.empty()) out += "." + fp;
  if (out.empty()) out = "0";
  const bool negative = value < 0 && rounded != 0;
  return (negative ? "-" : "") + prefix + out + suffix;
}

Value Impl::run() {
  switch (m_.id) {
    case Builtin::none:
      throw Fault{"no implementation for " + m_.owner + "." + m_.name};

    case Builtin::parse_int: return parse_int_like(false);
    case Builtin::parse_long: return parse_int_like(true);
    case Builtin::parse_double: return parse_floating();
    case Builtin::parse_float: return static_cast<float>(parse_floating());
    case Builtin::parse_boolean: {
      const Value& v = arg(0);
      if (is_null(v)) return false;
      std::string s = str(v);
      std::transform(s.begin(), s.end(), s.begin(), ::tolower);
      return s == "true";
    }
    case Builtin::to_string_static: return to_java_string(recv_ ? *recv_ : arg(0));
    case Builtin::identity: return recv_ ? *recv_ : arg(0);
    case Builtin::int_max: return std::max(int_arg(0), int_arg(1));
    case Builtin::int_min: return std::min(int_arg(0), int_arg(1));
    case Builtin::int_sum:
      return static_cast<std::int32_t>(static_cast<std::uint32_t>(int_arg(0)) + static_cast<std::uint32_t>(int_arg(1)));

    case Builtin::char_to_lower: return static_cast<char>(std::tolower(static_cast<unsigned char>(char_arg(0))));
    case Builtin::char_to_upper: return static_cast<char>(std::toupper(static_cast<unsigned char>(char_arg(0))));
    case Builtin::char_is_digit: return std::isdigit(static_cast<unsigned char>(char_arg(0))) != 0;
    case Builtin::char_is_letter: return std::isalpha(static_cast<unsigned char>(char_arg(0))) != 0;
    case Builtin::char_is_letter_or_digit: return std::isalnum(static_cast<unsigned char>(char_arg(0))) != 0;
    case Builtin::char_is_whitespace: {
      const char c = char_arg(0);
      return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || (c >= 0x1C && c <= 0x1F);
    }
    case Builtin::char_is_upper: return std::isupper(static_cast<unsigned char>(char_arg(0))) != 0;
    case Builtin::char_is_lower: return std::islower(static_cast<unsigned char>(char_arg(0))) != 0;
    case Builtin::char_numeric_value: {
      const auto c = static_cast<unsigned char>(std::tolower(static_cast<unsigned char>(char_arg(0))));
      if (c >= '0' && c <= '9') return static_cast<std::int32_t>(c - '0');
      if (c >= 'a' && c <= 'z') return static_cast<std::int32_t>(c - 'a' + 10);
      return std::int32_t{-1};
    }

    case Builtin::string_value_of: {
      if (args_.empty()) return std::string{};
      const Value& v = arg(0);
      if (const auto* a = std::get_if<ArrayRef>(&v); a && (*a)->elem.is(BaseType::char_)) {
        std::string s;
        for (const auto& c : (*a)->items) s.push_back(std::get<char>(c));
        return s;
      }
      return to_java_string(v);
    }
    case Builtin::string_join: {
      const std::string& delim = str(arg(0));
      std::vector<Value> elems;
      if (args_.size() == 2 && std::holds_alternative<ArrayRef>(args_[1])) {
        elems = std::get<ArrayRef>(args_[1])->items;
      } else if (args_.size() == 2 && std::holds_alternative<ObjectRef>(args_[1])) {
        elems = std::get<ObjectRef>(args_[1])->items;
      } else {
        elems.assign(args_.begin() + 1, args_.end());
      }
      std::string out;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i > 0) out += delim;
        out += to_java_string(elems[i]);
        check_size(out.size());
      }
      return out;
    }
    case Builtin::string_format: return format(str(arg(0)), 1);

    case Builtin::math_abs: {
      const Value& v = arg(0);
      if (const auto* i = std::get_if<std::int32_t>(&v)) {
        return *i < 0 ? static_cast<std::int32_t>(0U - static_cast<std::uint32_t>(*i)) : *i;
      }
      if (const auto* c = std::get_if<char>(&v)) return static_cast<std::int32_t>(static_cast<unsigned char>(*c));
      if (const auto* l = std::get_if<std::int64_t>(&v)) {
        return *l < 0 ? static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(*l)) : *l;
      }
      if (const auto* f = std::get_if<float>(&v)) return std::fabs(*f);
      return std::fabs(as_double(v));
    }
    case Builtin::math_max:
    case Builtin::math_min: {
      const Value& a = arg(0);
      const Value& b = arg(1);
      const bool max = m_.id == Builtin::math_max;
      if (is_integral(a) && is_integral(b)) {
        const auto x = as_long(a);
        const auto y = as_long(b);
        const auto r = max ? std::max(x, y) : std::min(x, y);
        if (std::holds_alternative<std::int64_t>(a) || std::holds_alternative<std::int64_t>(b)) return r;
        return static_cast<std::int32_t>(r);
      }
      const double x = as_double(a);
      const double y = as_double(b);
      const double r = (std::isnan(x) || std::isnan(y)) ? NAN : (max ? std::max(x, y) : std::min(x, y));
      if (std::holds_alternative<double>(a) || std::holds_alternative<double>(b)) return r;
      return static_cast<float>(r);
    }
    case Builtin::math_sqrt: return std::sqrt(as_double(arg(0)));
    case Builtin::math_pow: return std::pow(as_double(arg(0)), as_double(arg(1)));
    case Builtin::math_floor: return std::floor(as_double(arg(0)));
    case Builtin::math_ceil: return std::ceil(as_double(arg(0)));
    case Builtin::math_round: {
      const double d = as_double(arg(0));
      if (std::isnan(d)) return std::int64_t{0};
      return coerce(std::floor(d + 0.5), Type::of(BaseType::long_));
    }
    case Builtin::math_random: return random_next_double(ctx_.random_state());
    case Builtin::system_millis: return ctx_.millis();

    case Builtin::print_ln:
      ctx_.write((args_.empty() ? std::string{} : to_java_string(arg(0))) + "\n");
      return std::monostate{};
    case Builtin::print:
      ctx_.write(to_java_string(arg(0)));
      return std::monostate{};
    case Builtin::print_f:
      ctx_.write(format(str(arg(0)), 1));
      return std::monostate{};

    case Builtin::str_length: return static_cast<std::int32_t>(self_str().size());
    case Builtin::str_char_at: {
      const auto& s = self_str();
      const auto i = int_arg(0);
      if (i < 0 || static_cast<std::size_t>(i) >= s.size()) {
        ctx_.raise(kSioobe, "Index " + std::to_string(i) + " out of bounds for length " + std::to_string(s.size()));
      }
      return s[static_cast<std::size_t>(i)];
    }
    case Builtin::str_substring: {
      const auto& s = self_str();
      const auto n = static_cast<std::int64_t>(s.size());
      const std::int64_t b = int_arg(0);
      const std::int64_t e = args_.size() > 1 ? int_arg(1) : n;
      if (b < 0 || e > n || b > e) {
        ctx_.raise(kSioobe, "begin " + std::to_string(b) + ", end " + std::to_string(e) + ", length " +
                                std::to_string(n));
      }
      return s.substr(static_cast<std::size_t>(b), static_cast<std::size_t>(e - b));
    }
    case Builtin::str_index_of:
    case Builtin::str_last_index_of: {
      const auto& s = self_str();
      const Value& needle_v = arg(0);
      std::string needle = std::holds_alternative<std::string>(needle_v)
                               ? std::get<std::string>(needle_v)
                               : std::string(1, static_cast<char>(as_long(needle_v)));
      if (is_null(needle_v)) ctx_.raise(kNpe, "");
      std::size_t pos;
      if (m_.id == Builtin::str_index_of) {
        const auto from = args_.size() > 1 ? std::max<std::int32_t>(0, int_arg(1)) : 0;
        pos = static_cast<std::size_t>(from) > s.size() ? std::string::npos : s.find(needle, static_cast<std::size_t>(from));
      } else {
        pos = s.rfind(needle);
      }
      return pos == std::string::npos ? std::int32_t{-1} : static_cast<std::int32_t>(pos);
    }
    case Builtin::str_contains: return self_str().find(str(arg(0))) != std::string::npos;
    case Builtin::str_equals: return java_equals(*recv_, arg(0));
    case Builtin::str_equals_ignore_case: {
      const Value& v = arg(0);
      if (is_null(v)) return false;
      const auto& a = self_str();
      const auto& b = str(v);
      return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
             });
    }
    case Builtin::str_is_empty: return self_str().empty();
    case Builtin::str_to_lower: {
      std::string s = self_str();
      std::transform(s.begin(), s.end(), s.begin(), ::tolower);
      return s;
    }
    case Builtin::str_to_upper: {
      std::string s = self_str();
      std::transform(s.begin(), s.end(), s.begin(), ::toupper);
      return s;
    }
    case Builtin::str_trim:
    case Builtin::str_strip: {
      const auto& s = self_str();
      std::size_t b = 0;
      std::size_t e = s.size();
      const auto ws = [&](char c) {
        return m_.id == Builtin::str_trim ? static_cast<unsigned char>(c) <= ' '
                                          : std::isspace(static_cast<unsigned char>(c)) != 0;
      };
      while (b < e && ws(s[b])) ++b;
      while (e > b && ws(s[e - 1])) --e;
      return s.substr(b, e - b);
    }
    case Builtin::str_is_blank: {
      const auto& s = self_str();
      return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
    }
    case Builtin::str_split: return split(self_str(), str(arg(0)));
    case Builtin::str_replace: {
      const auto as_text = [&](const Value& v) {
        if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
        if (is_null(v)) ctx_.raise(kNpe, "");
        return std::string(1, static_cast<char>(as_long(v)));
      };
      const std::string from = as_text(arg(0));
      const std::string to = as_text(arg(1));
      const auto& s = self_str();
      if (from.empty()) {
        std::string out = to;
        for (char c : s) {
          out.push_back(c);
          out += to;
          check_size(out.size());
        }
        return out;
      }
      std::string out;
      std::size_t pos = 0;
      while (true) {
        const auto hit = s.find(from, pos);
        if (hit == std::string::npos) break;
        out.append(s, pos, hit - pos);
        out += to;
        check_size(out.size());
        pos = hit + from.size();
      }
      out.append(s, pos, std::string::npos);
      return out;
    }
    case Builtin::str_replace_all: {
      const auto re = compile_regex(str(arg(0)));
      ctx_.charge(1 + self_str().size() / 16);
      return make_string(std::regex_replace(self_str(), re, str(arg(1))));
    }
    case Builtin::str_matches: {
      const auto re = compile_regex(str(arg(0)));
      ctx_.charge(1 + self_str().size() / 16);
      return std::regex_match(self_str(), re);
    }
    case Builtin::str_to_char_array: {
      const auto& s = self_str();
      auto arr = ctx_.new_array(Type::of(BaseType::char_), s.size());
      for (std::size_t i = 0; i < s.size(); ++i) arr->items[i] = s[i];
      return arr;
    }
    case Builtin::str_starts_with: {
      const auto& s = self_str();
      const auto& p = str(arg(0));
      return s.compare(0, p.size(), p) == 0 && s.size() >= p.size();
    }
    case Builtin::str_ends_with: {
      const auto& s = self_str();
      const auto& p = str(arg(0));
      return s.size() >= p.size() && s.compare(s.size() - p.size(), p.size(), p) == 0;
    }
    case Builtin::str_concat: return make_string(self_str() + str(arg(0)));
    case Builtin::str_compare_to: {
      const auto& a = self_str();
      const auto& b = str(arg(0));
      const auto n = std::min(a.size(), b.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) {
          return static_cast<std::int32_t>(static_cast<unsigned char>(a[i])) -
                 static_cast<std::int32_t>(static_cast<unsigned char>(b[i]));
        }
      }
      return static_cast<std::int32_t>(a.size()) - static_cast<std::int32_t>(b.size());
    }
    case Builtin::str_repeat: {
      const auto n = int_arg(0);
      if (n < 0) ctx_.raise(kIae, "count is negative: " + std::to_string(n));
      const auto& s = self_str();
      check_size(s.size() * static_cast<std::size_t>(n));
      std::string out;
      for (std::int32_t i = 0; i < n; ++i) out += s;
      return out;
    }

    case Builtin::sb_new: {
      auto o = ctx_.new_object("java.lang.StringBuilder");
      if (!args_.empty() && !std::holds_alternative<std::int32_t>(args_[0])) o->text = to_java_string(args_[0]);
      return o;
    }
    case Builtin::sb_append: {
      auto& o = self_obj();
      const Value& v = arg(0);
      if (const auto* a = std::get_if<ArrayRef>(&v); a && (*a)->elem.is(BaseType::char_)) {
        for (const auto& c : (*a)->items) o.text.push_back(std::get<char>(c));
      } else {
        o.text += to_java_string(v);
      }
      check_size(o.text.size());
      return *recv_;
    }
    case Builtin::sb_reverse: {
      auto& o = self_obj();
      std::reverse(o.text.begin(), o.text.end());
      ctx_.charge(1 + o.text.size() / 64);
      return *recv_;
    }
    case Builtin::sb_to_string: return self_obj().text;
    case Builtin::sb_length: return static_cast<std::int32_t>(self_obj().text.size());
    case Builtin::sb_char_at:
    case Builtin::sb_set_char_at:
    case Builtin::sb_delete_char_at: {
      auto& o = self_obj();
      const auto i = int_arg(0);
      if (i < 0 || static_cast<std::size_t>(i) >= o.text.size()) {
        ctx_.raise(kSioobe, "index " + std::to_string(i) + ",length " + std::to_string(o.text.size()));
      }
      const auto idx = static_cast<std::size_t>(i);
      if (m_.id == Builtin::sb_char_at) return o.text[idx];
      if (m_.id == Builtin::sb_set_char_at) {
        o.text[idx] = char_arg(1);
        return std::monostate{};
      }
      o.text.erase(idx, 1);
      return *recv_;
    }
    case Builtin::sb_insert: {
      auto& o = self_obj();
      const auto i = int_arg(0);
      if (i < 0 || static_cast<std::size_t>(i) > o.text.size()) {
        ctx_.raise(kSioobe, "offset " + std::to_string(i) + ", length " + std::to_string(o.text.size()));
      }
      o.text.insert(static_cast<std::size_t>(i), to_java_string(arg(1)));
      check_size(o.text.size());
      return *recv_;
    }

    case Builtin::exc_new: {
      auto o = ctx_.new_object(owner_);
      if (!args_.empty() && !is_null(args_[0])) {
        o->text = to_java_string(args_[0]);
        o->has_text = true;
      }
      return o;
    }
    case Builtin::exc_get_message: {
      auto& o = self_obj();
      if (!o.has_text) return std::monostate{};
      return o.text;
    }
    case Builtin::exc_print_stack_trace:
      ctx_.write(to_java_string(*recv_) + "\n");
      return std::monostate{};

    case Builtin::arrays_sort: {
      auto& a = array(arg(0));
      const auto n = a.items.size();
      ctx_.charge(1 + n * static_cast<std::uint64_t>(std::log2(static_cast<double>(n) + 1)));
      std::stable_sort(a.items.begin(), a.items.end(),
                       [&](const Value& x, const Value& y) { return compare_values(x, y) < 0; });
      return std::monostate{};
    }
    case Builtin::arrays_to_string: {
      if (is_null(arg(0))) return std::string("null");
      auto& a = array(arg(0));
      std::string s = "[";
      for (std::size_t i = 0; i < a.items.size(); ++i) {
        if (i > 0) s += ", ";
        s += to_java_string(a.items[i]);
        check_size(s.size());
      }
      return s + "]";
    }
    case Builtin::arrays_fill: {
      auto& a = array(arg(0));
      ctx_.charge(1 + a.items.size() / 64);
      const Value v = coerce(arg(1), a.elem);
      std::fill(a.items.begin(), a.items.end(), v);
      return std::monostate{};
    }
    case Builtin::arrays_copy_of:
    case Builtin::arrays_copy_of_range: {
      auto& a = array(arg(0));
      std::int64_t from = 0;
      std::int64_t to = int_arg(1);
      if (m_.id == Builtin::arrays_copy_of_range) {
        from = int_arg(1);
        to = int_arg(2);
        if (from < 0 || from > static_cast<std::int64_t>(a.items.size())) {
          ctx_.raise("java.lang.ArrayIndexOutOfBoundsException",
                     "Index " + std::to_string(from) + " out of bounds for length " + std::to_string(a.items.size()));
        }
        if (from > to) ctx_.raise(kIae, std::to_string(from) + " > " + std::to_string(to));
      } else if (to < 0) {
        ctx_.raise("java.lang.NegativeArraySizeException", std::to_string(to));
      }
      const auto n = static_cast<std::size_t>(to - from);
      check_size(n);
      auto out = ctx_.new_array(a.elem, n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto src = static_cast<std::size_t>(from) + i;
        if (src < a.items.size()) out->items[i] = a.items[src];
      }
      return out;
    }
    case Builtin::arrays_equals: {
      if (is_null(arg(0)) || is_null(arg(1))) return is_null(arg(0)) && is_null(arg(1));
      return structurally_equal(arg(0), arg(1), 0.0);
    }
    case Builtin::arrays_as_list: {
      auto o = ctx_.new_object("java.util.ArrayList");
      if (args_.size() == 1) {
        if (const auto* a = std::get_if<ArrayRef>(&args_[0]); a && (*a)->elem.is_reference()) {
          o->items = (*a)->items;
          return o;
        }
      }
      o->items = args_;
      return o;
    }

    case Builtin::list_new: return ctx_.new_object("java.util.ArrayList");
    case Builtin::list_add: {
      auto& o = self_obj();
      check_size(o.items.size() + 1);
      o.items.push_back(arg(0));
      return true;
    }
    case Builtin::list_get:
    case Builtin::list_set:
    case Builtin::list_remove: {
      auto& o = self_obj();
      if (m_.id == Builtin::list_remove && !std::holds_alternative<std::int32_t>(arg(0))) {
        for (auto it = o.items.begin(); it != o.items.end(); ++it) {
          if (java_equals(*it, arg(0))) {
            o.items.erase(it);
            return true;
          }
        }
        return false;
      }
      const auto i = int_arg(0);
      list_arg_index(i, o.items.size());
      const auto idx = static_cast<std::size_t>(i);
      Value old = o.items[idx];
      if (m_.id == Builtin::list_set) o.items[idx] = arg(1);
      if (m_.id == Builtin::list_remove) o.items.erase(o.items.begin() + static_cast<std::ptrdiff_t>(idx));
      return old;
    }
    case Builtin::list_size: return static_cast<std::int32_t>(self_obj().items.size());
    case Builtin::list_is_empty: return self_obj().items.empty();
    case Builtin::list_contains:
    case Builtin::list_index_of: {
      auto& o = self_obj();
      ctx_.charge(1 + o.items.size() / 16);
      for (std::size_t i = 0; i < o.items.size(); ++i) {
        if (java_equals(o.items[i], arg(0))) {
          if (m_.id == Builtin::list_contains) return true;
          return static_cast<std::int32_t>(i);
        }
      }
      if (m_.id == Builtin::list_contains) return false;
      return std::int32_t{-1};
    }
    case Builtin::list_clear:
      self_obj().items.clear();
      return std::monostate{};

    case Builtin::opt_of_nullable:
    case Builtin::opt_of:
    case Builtin::opt_empty: {
      auto o = ctx_.new_object("java.util.Optional");
      if (m_.id != Builtin::opt_empty) {
        if (is_null(arg(0))) {
          if (m_.id == Builtin::opt_of) ctx_.raise(kNpe, "");
        } else {
          o->items.push_back(arg(0));
        }
      }
      return o;
    }
    case Builtin::opt_or_else: {
      auto& o = self_obj();
      return o.items.empty() ? arg(0) : o.items[0];
    }
    case Builtin::opt_is_present: return !self_obj().items.empty();
    case Builtin::opt_is_empty: return self_obj().items.empty();
    case Builtin::opt_get: {
      auto& o = self_obj();
      if (o.items.empty()) ctx_.raise("java.util.NoSuchElementException", "No value present");
      return o.items[0];
    }

    case Builtin::input_new: return ctx_.new_object(owner_);
    case Builtin::input_read:
      if (self_obj().cls == "java.util.Scanner") ctx_.raise("java.util.NoSuchElementException", "No line found");
      return std::monostate{};

    case Builtin::random_new: {
      auto o = ctx_.new_object("java.util.Random");
      o->state = random_seed(args_.empty() ? 42 : as_long(args_[0]));
      return o;
    }
    case Builtin::random_next_int: {
      auto& st = self_obj().state;
      if (args_.empty()) return random_next(st, 32);
      const auto bound = int_arg(0);
      if (bound <= 0) ctx_.raise(kIae, "bound must be positive");
      if ((bound & -bound) == bound) {
        return static_cast<std::int32_t>((static_cast<std::int64_t>(bound) * random_next(st, 31)) >> 31);
      }
      std::int32_t bits;
      std::int32_t val;
      do {
        bits = random_next(st, 31);
        val = bits % bound;
      } while (static_cast<std::int32_t>(static_cast<std::uint32_t>(bits) - static_cast<std::uint32_t>(val) +
                                         static_cast<std::uint32_t>(bound - 1)) < 0);
      return val;
    }
    case Builtin::random_next_double: return random_next_double(self_obj().state);

    case Builtin::decimal_format_new: {
      auto o = ctx_.new_object("java.text.DecimalFormat");
      o->text = str(arg(0));
      return o;
    }
    case Builtin::decimal_format_format: return decimal_format(self_obj().text, as_double(arg(0)));

    case Builtin::ints_try_parse: {
      const Value& v = arg(0);
      if (is_null(v)) ctx_.raise(kNpe, "");
      const auto& s = str(v);
      std::string_view body(s);
      bool neg = false;
      if (!body.empty() && body[0] == '-') {
        neg = true;
        body.remove_prefix(1);
      }
      if (body.empty() || !std::all_of(body.begin(), body.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return std::monostate{};
      }
      std::uint64_t mag = 0;
      auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), mag);
      if (ec != std::errc() || mag > (neg ? 2147483648ULL : 2147483647ULL)) return std::monostate{};
      return static_cast<std::int32_t>(neg ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag));
    }
    case Builtin::strings_is_null_or_empty: return is_null(arg(0)) || str(arg(0)).empty();
    case Builtin::strings_repeat: {
      const auto& s = str(arg(0));
      const auto n = int_arg(1);
      if (n < 0) ctx_.raise(kIae, "invalid count: " + std::to_string(n));
      check_size(s.size() * static_cast<std::size_t>(n));
      std::string out;
      for (std::int32_t i = 0; i < n; ++i) out += s;
      return out;
    }
    case Builtin::su_reverse: {
      if (is_null(arg(0))) return std::monostate{};
      std::string s = str(arg(0));
      std::reverse(s.begin(), s.end());
      return s;
    }
    case Builtin::su_is_blank: {
      if (is_null(arg(0))) return true;
      const auto& s = str(arg(0));
      return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
    }
    case Builtin::su_is_empty: return is_null(arg(0)) || str(arg(0)).empty();
    case Builtin::su_capitalize: {
      if (is_null(arg(0))) return std::monostate{};
      std::string s = str(arg(0));
      if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
      return s;
    }

    case Builtin::assert_equals: {
      const double tol = args_.size() > 2 ? as_double(args_[2]) : 1e-9;
      if (!structurally_equal(arg(0), arg(1), tol)) {
        ctx_.raise("java.lang.AssertionError",
                   "expected:<" + to_java_string(arg(0)) + "> but was:<" + to_java_string(arg(1)) + ">");
      }
      return std::monostate{};
    }
    case Builtin::assert_true:
    case Builtin::assert_false: {
      const bool want = m_.id == Builtin::assert_true;
      const Value& v = arg(0);
      if (!std::holds_alternative<bool>(v) || std::get<bool>(v) != want) {
        ctx_.raise("java.lang.AssertionError", want ? "expected true" : "expected false");
      }
      return std::monostate{};
    }
    case Builtin::assert_not_null:
      if (is_null(arg(0))) ctx_.raise("java.lang.AssertionError", "expected a non-null value");
      return std::monostate{};
    case Builtin::assert_null:
      if (!is_null(arg(0))) ctx_.raise("java.lang.AssertionError", "expected null but was:<" + to_java_string(arg(0)) + ">");
      return std::monostate{};
  }
  throw Fault{"unhandled builtin " + m_.name};
}

}  // namespace

Value call_builtin(BuiltinContext& ctx, const frontend::LibMethod& m, const std::string& owner, Value* recv,
                   std::vector<Value>& args) {
  return Impl(ctx, m, owner, recv, args).run();
}

}  // namespace snipfit::runtime::detail
