#include "snipfit/testkit/testkit.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "snipfit/error.hpp"
#include "snipfit/frontend/analyzer.hpp"
#include "snipfit/frontend/parser.hpp"

namespace snipfit::testkit {
namespace {

using frontend::Expr;
using frontend::ExprKind;
using frontend::Stmt;
using frontend::StmtKind;

struct Decl {
  std::string name;
  std::string type;
  std::size_t stmt = 0;  // index into the top-level statements
  std::size_t declarator = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Decl> top_level_decls(const std::vector<frontend::StmtPtr>& stmts) {
  std::vector<Decl> out;
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    const auto& s = stmts[i];
    if (!s || s->kind != StmtKind::local_var) continue;
    for (std::size_t k = 0; k < s->decls.size(); ++k) {
      std::string type = s->type.spelled();
      for (int d = 0; d < s->decls[k].extra_dims; ++d) type += "[]";
      out.push_back({s->decls[k].name, std::move(type), i, k});
    }
  }
  return out;
}

/// Collects (offset, name) for every assignment to a simple name: declarator
/// initializers and assignment expressions, at any depth.
class AssignmentScan {
 public:
  std::vector<std::pair<std::uint32_t, std::string>> found;

  void stmt(const Stmt* s) {
    if (!s) return;
    for (const auto& d : s->decls) {
      if (d.init) {
        found.emplace_back(d.name_range.begin, d.name);
        expr(d.init.get());
      }
    }
    for (const auto& b : s->body) stmt(b.get());
    expr(s->expr.get());
    for (const auto& u : s->update) expr(u.get());
    stmt(s->then_branch.get());
    stmt(s->else_branch.get());
    for (const auto& c : s->catches) stmt(c.body.get());
  }

  void expr(const Expr* e) {
    if (!e) return;
    if (e->kind == ExprKind::assign && !e->args.empty() && e->args[0] && e->args[0]->kind == ExprKind::name) {
      found.emplace_back(e->range.begin, e->args[0]->text);
    }
    expr(e->target.get());
    for (const auto& a : e->args) expr(a.get());
  }
};

std::string join_imports(const std::vector<std::string>& imports) {
  std::string out;
  for (const auto& i : imports) out += i + "\n";
  return out;
}

std::string params(const TypeSignature& sig, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < sig.arg_types.size(); ++i) {
    if (i) out += ", ";
    out += sig.arg_types[i] + " " + names[i];
  }
  return out;
}

std::vector<std::string> compile_messages(const std::string& program) {
  const frontend::SourceUnit unit(program);
  const auto r = frontend::check(unit);
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics) {
    out.push_back(std::string(frontend::code_name(d.code)) + " at " + std::to_string(d.span.start_line) + ":" +
                  std::to_string(d.span.start_col) + ": " + d.message);
  }
  return out;
}

/// Re-indents `body` by four spaces after removing its common indentation.
std::string indent_body(std::string_view body) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto nl = body.find('\n', pos);
    const auto end = nl == std::string_view::npos ? body.size() : nl;
    lines.emplace_back(body.substr(pos, end - pos));
    pos = nl == std::string_view::npos ? body.size() : nl + 1;
  }
  std::size_t common = std::string::npos;
  for (const auto& l : lines) {
    const auto first = l.find_first_not_of(" \t");
    if (first != std::string::npos && l.find_first_not_of(" \t\r") != std::string::npos) common = std::min(common, first);
  }
  std::string out;
  bool started = false;
  for (const auto& l : lines) {
    if (l.find_first_not_of(" \t\r") == std::string::npos) {
      if (started) out += "\n";
      continue;
    }
    started = true;
    out += "    " + l.substr(common) + "\n";
  }
  while (out.size() >= 2 && out[out.size() - 1] == '\n' && out[out.size() - 2] == '\n') out.pop_back();
  return out;
}

bool supported_base(std::string_view t) {
  static const std::vector<std::string_view> kTypes{"String", "int", "long", "double", "float",
                                                   "boolean", "char", "short", "byte"};
  return std::find(kTypes.begin(), kTypes.end(), t) != kTypes.end();
}

}  // namespace

std::string to_string(const TypeSignature& sig) {
  std::string s = "(";
  for (std::size_t i = 0; i < sig.arg_types.size(); ++i) {
    if (i) s += ", ";
    s += sig.arg_types[i];
  }
  return s + ")->" + sig.ret_type;
}

TypeSignature parse_signature(std::string_view text) {
  const auto t = trim(text);
  const auto close = t.find(')');
  const auto arrow = t.find("->", close == std::string::npos ? 0 : close);
  if (t.empty() || t.front() != '(' || close == std::string::npos || arrow != close + 1) {
    throw Error(ErrorKind::invalid_argument, "signature must look like (T1, T2)->R: " + std::string(text));
  }
  TypeSignature sig;
  sig.source = SignatureSource::user;
  const std::string inner = t.substr(1, close - 1);
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    const auto comma = inner.find(',', pos);
    auto part = trim(std::string_view(inner).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!part.empty()) sig.arg_types.push_back(part);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  sig.ret_type = trim(std::string_view(t).substr(arrow + 2));
  if (sig.arg_types.empty() || sig.ret_type.empty()) {
    throw Error(ErrorKind::invalid_argument, "signature needs at least one argument and a return type");
  }
  return sig;
}

std::optional<TypeSignature> suggest_types(const repair::Candidate& c, std::size_t max_args) {
  if (c.error_count != 0 || c.degenerate) return std::nullopt;
  const auto parsed = frontend::parse_statements(c.body);
  const auto decls = top_level_decls(parsed.statements);
  AssignmentScan scan;
  for (const auto& s : parsed.statements) scan.stmt(s.get());
  if (scan.found.empty()) return std::nullopt;
  const auto last = std::max_element(scan.found.begin(), scan.found.end(),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto ret = std::find_if(decls.begin(), decls.end(), [&](const Decl& d) { return d.name == last->second; });
  if (ret == decls.end()) return std::nullopt;
  TypeSignature sig;
  sig.ret_type = ret->type;
  for (const auto& d : decls) {
    if (d.name != ret->name) sig.arg_types.push_back(d.type);
  }
  if (sig.arg_types.empty()) return std::nullopt;
  if (max_args > 0 && sig.arg_types.size() > max_args) sig.arg_types.resize(max_args);
  return sig;
}

std::optional<TestableFunction> synthesize_function(const repair::Candidate& c, const TypeSignature& sig) {
  if (c.error_count != 0 || c.degenerate || sig.arg_types.empty()) return std::nullopt;
  const auto parsed = frontend::parse_statements(c.body);
  const auto decls = top_level_decls(parsed.statements);

  const Decl* ret = nullptr;
  for (const auto& d : decls) {
    if (d.type == sig.ret_type) ret = &d;
  }
  if (!ret) return std::nullopt;
  std::vector<const Decl*> bound;
  for (const auto& type : sig.arg_types) {
    const Decl* pick = nullptr;
    for (const auto& d : decls) {
      if (d.type != type || &d == ret || std::find(bound.begin(), bound.end(), &d) != bound.end()) continue;
      pick = &d;
      break;
    }
    if (!pick) return std::nullopt;
    bound.push_back(pick);
  }

  // Rewrite statements that declare bound variables, last statement first.
  std::string body = c.body;
  std::map<std::size_t, std::vector<std::size_t>> by_stmt;
  for (const auto* d : bound) by_stmt[d->stmt].push_back(d->declarator);
  for (auto it = by_stmt.rbegin(); it != by_stmt.rend(); ++it) {
    const auto& s = *parsed.statements[it->first];
    std::string replacement;
    std::vector<std::string> kept;
    for (std::size_t k = 0; k < s.decls.size(); ++k) {
      if (std::find(it->second.begin(), it->second.end(), k) != it->second.end()) continue;
      const auto& r = s.decls[k].range;
      kept.push_back(c.body.substr(r.begin, r.end - r.begin));
    }
    std::size_t begin = s.range.begin;
    std::size_t end = s.range.end;
    if (!kept.empty()) {
      replacement = s.type.spelled() + " ";
      for (std::size_t k = 0; k < kept.size(); ++k) replacement += (k ? ", " : "") + kept[k];
      replacement += ";";
    } else {
      // Drop the whole line when the statement is alone on it.
      const auto ls = body.rfind('\n', begin == 0 ? 0 : begin - 1);
      const std::size_t line_begin = (begin == 0 || ls == std::string::npos) ? 0 : ls + 1;
      auto le = body.find('\n', end);
      if (le == std::string::npos) le = body.size();
      if (trim(std::string_view(body).substr(line_begin, begin - line_begin)).empty() &&
          trim(std::string_view(body).substr(end, le - end)).empty()) {
        begin = line_begin;
        end = le < body.size() ? le + 1 : le;
      }
    }
    body.replace(begin, end - begin, replacement);
  }

  TestableFunction fn;
  fn.signature = sig;
  fn.origin_candidate = c.id;
  fn.return_var = ret->name;
  for (const auto* d : bound) fn.arg_vars.push_back(d->name);
  fn.imports = join_imports(c.imports);
  fn.source = "public static " + sig.ret_type + " snippet(" + params(sig, fn.arg_vars) + "){\n" + indent_body(body) +
              "    return " + fn.return_var + ";\n}\n";
  if (!compile_messages(runtime::test_program(fn.imports, fn.source, "")).empty()) return std::nullopt;
  return fn;
}

std::string default_value(std::string_view type) {
  auto base = type;
  int dims = 0;
  while (base.size() > 2 && base.substr(base.size() - 2) == "[]") {
    base.remove_suffix(2);
    ++dims;
  }
  if (!supported_base(base)) throw Error(ErrorKind::invalid_argument, "no default value for type " + std::string(type));
  if (dims > 0) {
    std::string s = "new " + std::string(base) + "[0]";
    for (int d = 1; d < dims; ++d) s += "[]";
    return s;
  }
  if (base == "String") return "\"empty\"";
  if (base == "boolean") return "false";
  if (base == "char") return "'a'";
  if (base == "double") return "0.0";
  if (base == "float") return "0.0f";
  return "0";
}

TestCase generate_test_skeleton(const TypeSignature& sig) {
  std::string args;
  for (std::size_t i = 0; i < sig.arg_types.size(); ++i) {
    if (i) args += ", ";
    args += default_value(sig.arg_types[i]);
  }
  const auto expected = default_value(sig.ret_type);
  return TestCase{"@Test\npublic void testSnippet(){\n    assertEquals(snippet(" + args + "), " + expected + ");\n}", true};
}

std::string stub_function(const TypeSignature& sig) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sig.arg_types.size(); ++i) names.push_back("a" + std::to_string(i));
  return "public static " + sig.ret_type + " snippet(" + params(sig, names) + "){\n    return " +
         default_value(sig.ret_type) + ";\n}\n";
}

std::vector<std::string> check_test(const TestCase& test, const TypeSignature& sig) {
  return compile_messages(runtime::test_program("", stub_function(sig), test.source));
}

std::vector<std::pair<std::string, pipeline::TestRecord>> test_candidates(pipeline::TaskSession& session,
                                                                          const TestCase& test,
                                                                          const TypeSignature& sig,
                                                                          const TestOptions& opts) {
  if (const auto problems = check_test(test, sig); !problems.empty()) {
    throw Error(ErrorKind::invalid_argument, "test does not compile against " + to_string(sig) + ": " + problems.front());
  }
  const auto snap = session.snapshot();
  std::vector<std::pair<std::string, pipeline::TestRecord>> results;
  std::size_t tested = 0;
  for (const auto& e : snap.entries) {
    const auto& c = e.candidate;
    if (c.error_count != 0 || c.degenerate) continue;
    if (opts.limit > 0 && tested >= opts.limit) break;
    ++tested;
    pipeline::TestRecord rec;
    if (const auto fn = synthesize_function(c, sig)) {
      const auto out = runtime::run_test(fn->imports, fn->source, test.source, opts.budget,
                                         session.evaluator().registry());
      rec.status = std::string(runtime::to_string(out.status));
      rec.detail = out.detail;
      rec.elapsed_ms = out.elapsed_ms;
      rec.function_source = fn->source;
    } else {
      rec.status = "not_synthesized";
    }
    results.emplace_back(c.id, std::move(rec));
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  session.apply_tests(results);
  return results;
}

std::vector<TypeSignature> suggest_for_session(const pipeline::TaskSession& session, std::size_t limit) {
  const auto snap = session.snapshot();
  std::vector<std::pair<TypeSignature, int>> counts;
  for (const auto& e : snap.entries) {
    auto sig = suggest_types(e.candidate);
    if (!sig) continue;
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& p) { return p.first == *sig; });
    if (it == counts.end()) {
      counts.emplace_back(std::move(*sig), 1);
    } else {
      ++it->second;
    }
  }
  std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<TypeSignature> out;
  for (auto& [sig, n] : counts) {
    if (limit > 0 && out.size() >= limit) break;
    out.push_back(std::move(sig));
  }
  return out;
}

nlohmann::json to_json(const TypeSignature& sig) {
  return {{"args", sig.arg_types},
          {"ret", sig.ret_type},
          {"source", sig.source == SignatureSource::user ? "user" : "suggested"},
          {"text", to_string(sig)}};
}

TypeSignature signature_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_signature(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorKind::format, "signature must be an object or a string");
  if (j.contains("text") && !j.contains("args")) return parse_signature(j.at("text").get<std::string>());
  const auto args = j.find("args");
  const auto ret = j.find("ret");
  if (args == j.end() || !args->is_array() || args->empty() || ret == j.end() || !ret->is_string()) {
    throw Error(ErrorKind::format, "signature needs a non-empty \"args\" array and a \"ret\" string");
  }
  TypeSignature sig;
  for (const auto& a : *args) {
    if (!a.is_string()) throw Error(ErrorKind::format, "signature args must be strings");
    sig.arg_types.push_back(a.get<std::string>());
  }
  sig.ret_type = ret->get<std::string>();
  sig.source = j.value("source", std::string("user")) == "suggested" ? SignatureSource::suggested : SignatureSource::user;
  return sig;
}

}  // namespace snipfit::testkit
