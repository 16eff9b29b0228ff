#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "snipfit/error.hpp"
#include "snipfit/pipeline/splice.hpp"
#include "snipfit/repair/cascade.hpp"
#include "snipfit/repair/fixes.hpp"
#include "snipfit/repair/integrate.hpp"

using namespace snipfit;
using namespace snipfit::repair;

namespace {

const std::string kFig2Snippet =
    "import com.google.common.primitives.Ints;\n"
    "import java.util.Optional;\n"
    "\n"
    "int foo = 0;\n"
    "foo = Optional\n"
    "     .ofNullable(Ints.tryParse(myString))\n"
    "     .orElse(0);\n";

Candidate make(const std::string& text, const Evaluator& eval) {
  auto c = Candidate::from_snippet(corpus::RawSnippet{10, 1, 0, text, 3}, 0);
  eval.refresh(c);
  return c;
}

int non_blank_lines(const std::string& body) {
  int n = 0;
  for (const auto& l : body_lines(body)) n += l.find_first_not_of(" \t\r") != std::string::npos;
  return n;
}

void check_monotone(const Candidate& c) {
  int prev = c.stage_errors[0];
  for (const auto& p : c.patches) {
    CHECK(p.errors_after <= p.errors_before);
    CHECK(p.errors_before <= prev);
    prev = p.errors_after;
  }
  for (int i = 1; i < kStageCount; ++i) CHECK(c.stage_errors[i] <= c.stage_errors[i - 1]);
  CHECK(c.error_count == static_cast<int>(c.diagnostics.size()));
}

void check_replay(const Candidate& c) {
  const auto r = replay(c.original, c.patches);
  CHECK(r.body == c.body);
  CHECK(r.imports == c.imports);
}

// Independent oracle: does any single remaining non-blank line deletion
// strictly reduce the error count?
bool strictly_improvable(const Candidate& c, const Evaluator& eval) {
  const auto lines = body_lines(c.body);
  for (std::size_t skip = 0; skip < lines.size(); ++skip) {
    if (lines[skip].find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string body;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i != skip) body += lines[i] + "\n";
    }
    if (eval.error_count(c.imports, body) < c.error_count) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("splice hoists imports, re-indents the body and is reversible") {
  const frontend::SourceUnit ctx("import java.util.List;\n\npublic class Main {\n  public static void main(String[] args) {\n"
                                 "    int keep = 1;\n  }\n}\n");
  const auto s = pipeline::splice(ctx, {5, 5}, {"import java.util.Optional;"}, "  int a = 1;\n    a++;\n");
  CHECK(s.unit.text() ==
        "import java.util.List;\nimport java.util.Optional;\n\npublic class Main {\n  public static void main(String[] args) {\n"
        "    int a = 1;\n      a++;\n    int keep = 1;\n  }\n}\n");
  CHECK(pipeline::unsplice(s) == ctx.text());
  CHECK(s.body_first_line == 6);

  // Every non-indent body byte maps back to the same byte of the body.
  const std::string body = "  int a = 1;\n    a++;\n";
  for (std::size_t u = s.body_offset; u < s.body_offset + s.body_length; ++u) {
    const char ch = s.unit.text()[u];
    if (ch == ' ' || ch == '\n') continue;
    const auto b = s.body_offset_of(u);
    REQUIRE(b.has_value());
    CHECK(body[*b] == ch);
  }
  CHECK_FALSE(s.body_offset_of(0).has_value());
  CHECK(s.in_imports(s.import_offset));
}

TEST_CASE("splice without context imports puts them first, followed by a blank line") {
  const auto& h = pipeline::harness_context();
  const auto s = pipeline::splice(h, pipeline::harness_cursor(), {"import java.util.List;"}, "List xs = null;");
  CHECK(s.unit.text().rfind("import java.util.List;\n\npublic class Main {\n", 0) == 0);
  CHECK(s.unit.text().find("        List xs = null;\n") != std::string::npos);
  CHECK(pipeline::unsplice(s) == h.text());

  const auto empty = pipeline::splice(h, pipeline::harness_cursor(), {}, "");
  CHECK(empty.unit.text() == h.text());
  CHECK_THROWS_AS(pipeline::splice(h, {99, 1}, {}, "x"), Error);
  CHECK_THROWS_AS(pipeline::splice(h, {1, 200}, {}, "x"), Error);
}

TEST_CASE("unsplice round-trips random contexts and cursors") {
  std::mt19937 rng(7);
  const std::vector<std::string> pieces{"class A {", "  int x;", "}", "", "import a.b;", "    // c", "\t"};
  for (int iter = 0; iter < 200; ++iter) {
    std::string text;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) text += pieces[rng() % pieces.size()] + (rng() % 5 ? "\n" : "");
    const frontend::SourceUnit ctx(text);
    const int line = 1 + static_cast<int>(rng() % static_cast<unsigned>(ctx.line_count()));
    const int col = 1 + static_cast<int>(rng() % (ctx.line_text(line).size() + 1));
    std::vector<std::string> imports;
    if (rng() % 2) imports.push_back("import x.Y;");
    const auto s = pipeline::splice(ctx, {line, col}, imports, rng() % 2 ? "a();\n  b();" : "");
    CHECK(pipeline::unsplice(s) == text);
  }
}

TEST_CASE("extract_imports hoists, deduplicates and is idempotent") {
  const auto eval = Evaluator::harness();
  auto c = extract_imports(make(kFig2Snippet, eval), eval);
  CHECK(c.imports == std::vector<std::string>{"import com.google.common.primitives.Ints;", "import java.util.Optional;"});
  CHECK(non_blank_lines(c.body) == 4);
  CHECK(c.patches.size() == 2);
  check_replay(c);
  const auto again = extract_imports(c, eval);
  CHECK(again.body == c.body);
  CHECK(again.patches.size() == c.patches.size());

  auto dup = extract_imports(make("import java.util.List;\nimport java.util.List;\nList xs = null;\n", eval), eval);
  CHECK(dup.imports == std::vector<std::string>{"import java.util.List;"});
  CHECK(dup.body == "List xs = null;\n");
  CHECK(dup.error_count == 0);
  check_replay(dup);

  auto none = extract_imports(make("int a = 1;\n", eval), eval);
  CHECK(none.patches.empty());
}

TEST_CASE("snippetize removes a lone class wrapper only") {
  const auto eval = Evaluator::harness();
  auto c = snippetize(make("class A { static void f(){ int x = 1; } }", eval), eval);
  CHECK(c.body == "int x = 1;");
  CHECK(c.error_count == 0);
  REQUIRE(c.patches.size() == 1);
  CHECK(c.patches[0].kind == PatchKind::strip_class);
  check_replay(c);

  const std::string multi = "public class A {\n    public static void main(String[] args) {\n        int x = 1;\n    }\n}\n";
  auto m = snippetize(make(multi, eval), eval);
  CHECK(m.body == "        int x = 1;\n");
  CHECK(m.error_count == 0);

  const std::string with_field = "class A {\n  int n = 2;\n  void f() { n++; }\n}\n";
  CHECK(snippetize(make(with_field, eval), eval).body == with_field);
  const std::string two = "class A { void f(){} void g(){} }";
  CHECK(snippetize(make(two, eval), eval).body == two);
  CHECK(snippetize(make("int x = 1;\nx++;\n", eval), eval).patches.empty());
}

TEST_CASE("unwrap_main_in_main keeps the inner statements when that lowers errors") {
  const auto eval = Evaluator::harness();
  auto c = unwrap_main_in_main(
      make("public static void main(String[] args) {\n    System.out.println(\"hi\");\n}\n", eval), eval);
  CHECK(c.body == "    System.out.println(\"hi\");\n");
  CHECK(c.error_count == 0);
  REQUIRE(c.patches.size() == 1);
  CHECK(c.patches[0].kind == PatchKind::unwrap_main);

  CHECK(unwrap_main_in_main(make("int x = 1;\n", eval), eval).patches.empty());
  // Unwrapping exposes a duplicate declaration: same count, change rejected.
  const std::string dup = "public static void main(String[] a) {\n  int x = 1;\n}\nint x = 2;\n";
  const auto d = unwrap_main_in_main(make(dup, eval), eval);
  CHECK(d.body == dup);
  CHECK(d.patches.empty());
}

TEST_CASE("targeted fixes") {
  const auto eval = Evaluator::harness();
  SUBCASE("missing semicolon") {
    auto c = targeted_fix_pass(make("int foo = 0", eval), eval);
    CHECK(c.body == "int foo = 0;");
    CHECK(c.error_count == 0);
    REQUIRE(c.patches.size() == 1);
    CHECK(c.patches[0].kind == PatchKind::insert_token);
  }
  SUBCASE("standard library import preferred over third-party entries") {
    REQUIRE(eval.registry().lookup("List").size() > 1);
    auto c = targeted_fix_pass(make("List xs = null;\n", eval), eval);
    CHECK(c.imports == std::vector<std::string>{"import java.util.List;"});
    CHECK(c.error_count == 0);
  }
  SUBCASE("declaration inferred from an assigned string") {
    auto c = targeted_fix_pass(make("var = \"some text\";\n", eval), eval);
    CHECK(c.body == "String var = \"empty\";\nvar = \"some text\";\n");
    CHECK(c.error_count == 0);
  }
  SUBCASE("declaration inferred from an int literal") {
    auto c = targeted_fix_pass(make("x = 5;\n", eval), eval);
    CHECK(c.body == "int x = 0;\nx = 5;\n");
  }
  SUBCASE("no trial helps: unchanged") {
    // Every declaration collides with the later one, so none lowers the count.
    auto c = make("y = 5;\nint y = 0;\n", eval);
    REQUIRE(c.error_count > 0);
    for (const auto& d : c.diagnostics) {
      if (d.code == frontend::DiagCode::undeclared_var && d.hint == "y") {
        CHECK_FALSE(fix_undeclared_variable(c, d, eval).has_value());
      }
    }
  }
  SUBCASE("stray token removed") {
    auto c = targeted_fix_pass(make("int a = 1;;\n) int b = 2;\n", eval), eval);
    CHECK(c.error_count == 0);
    CHECK(c.body == "int a = 1;;\n int b = 2;\n");
  }
  SUBCASE("default initializers") {
    CHECK(default_initializer("String") == "\"empty\"");
    CHECK(default_initializer("int") == "0");
    CHECK(default_initializer("long") == "0L");
    CHECK(default_initializer("double") == "0.0");
    CHECK(default_initializer("float") == "0.0f");
    CHECK(default_initializer("boolean") == "false");
    CHECK(default_initializer("char") == "'a'");
    CHECK(default_initializer("int[][]") == "new int[0][]");
  }
}

TEST_CASE("worked example reaches zero errors through imports and a declaration") {
  const auto eval = Evaluator::harness();
  const auto c = run_cascade(Candidate::from_snippet(corpus::RawSnippet{10, 1, 0, kFig2Snippet, 3}, 0), eval);
  CHECK(c.error_count == 0);
  CHECK(c.imports == std::vector<std::string>{"import com.google.common.primitives.Ints;", "import java.util.Optional;"});
  CHECK(c.body ==
        "\nString myString = \"empty\";\nint foo = 0;\nfoo = Optional\n     .ofNullable(Ints.tryParse(myString))\n"
        "     .orElse(0);\n");
  CHECK(c.deleted_lines.empty());
  CHECK(c.stage == Stage::fixed);
  check_monotone(c);
  check_replay(c);
}

TEST_CASE("delete_lines follows the configured order and acceptance") {
  const auto eval = Evaluator::harness();
  CHECK(all_deletion_configs().size() == 8);
  CHECK(all_deletion_configs().front() == DeletionConfig{});
  CHECK(to_string(DeletionConfig{}) == "bottom_up/multi/non_strict");

  auto two = delete_lines(make("int a = 1;\nint b = c + 1;\n", eval), eval);
  CHECK(two.body == "int a = 1;\n");
  CHECK(two.error_count == 0);
  CHECK(two.deleted_lines == std::vector<int>{1});
  CHECK_FALSE(two.degenerate);
  check_replay(two);

  // Deleting line 1 orphans both uses of x on line 2 (1 -> 2 errors).
  const std::string orphan = "int x = bad;\nint y = x + x;\n";
  const auto bu = delete_lines(make(orphan, eval), eval, {DeletionOrder::bottom_up, DeletionLoops::single, Acceptance::non_strict});
  const auto td = delete_lines(make(orphan, eval), eval, {DeletionOrder::top_down, DeletionLoops::single, Acceptance::non_strict});
  CHECK(bu.error_count == 0);
  CHECK(td.error_count == 1);
  CHECK(td.body == "int x = bad;\n");
  CHECK(bu.degenerate);

  auto clean = make("int a = 1;\n", eval);
  CHECK(delete_lines(clean, eval).patches.empty());
}

TEST_CASE("deletion invariants on generated snippets") {
  const auto eval = Evaluator::harness();
  const std::vector<std::string> pool{"int a = 1;", "int b = a + 1;", "a = b;", "x = 3;", "int c = q;",
                                      "System.out.println(a);", "if (a > 0) {", "}", "b++;", "String s = a;",
                                      "for (int i = 0; i < 3; i++) {", "int a = 2;"};
  std::mt19937 rng(11);
  int attained = 0;
  int fixtures = 0;
  for (int iter = 0; iter < 60; ++iter) {
    std::string text;
    const int n = 2 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) text += pool[rng() % pool.size()] + "\n";
    auto c = make(text, eval);
    if (c.error_count == 0) continue;
    ++fixtures;
    const auto oracle = exhaustive_minimum(c, eval);
    CHECK(oracle.subsets == (1ULL << non_blank_lines(c.body)));
    for (const auto& cfg : all_deletion_configs()) {
      const auto r = delete_lines(c, eval, cfg);
      CHECK(r.error_count >= oracle.minimum);
      CHECK(r.error_count <= c.error_count);
      int prev = c.error_count;
      for (const auto& p : r.patches) {
        CHECK(p.errors_before == prev);
        if (cfg.acceptance == Acceptance::strict) {
          CHECK(p.errors_after < p.errors_before);
        } else {
          CHECK(p.errors_after <= p.errors_before);
        }
        prev = p.errors_after;
      }
      if (cfg.loops == DeletionLoops::multi) {
        CHECK(r.patches.size() <= static_cast<std::size_t>(non_blank_lines(c.body)));
      }
      if (cfg == DeletionConfig{DeletionOrder::bottom_up, DeletionLoops::multi, Acceptance::strict}) {
        CHECK_FALSE(strictly_improvable(r, eval));
      }
      if (cfg == DeletionConfig{}) attained += r.error_count == oracle.minimum;
      check_replay(r);
    }
  }
  CHECK(fixtures > 20);
  CHECK(attained * 10 >= fixtures * 9);
}

TEST_CASE("exhaustive_minimum enforces its size limit") {
  const auto eval = Evaluator::harness();
  std::string big;
  for (int i = 0; i < 11; ++i) big += "x" + std::to_string(i) + " = 1;\n";
  CHECK_THROWS_AS(exhaustive_minimum(make(big, eval), eval), Error);
  const auto r = exhaustive_minimum(make("int a = q;\n", eval), eval);
  CHECK(r.minimum == 0);
  CHECK(r.minimum_nonempty == 1);
  CHECK(r.subsets == 2);
}

TEST_CASE("cascade stages are gated and monotone") {
  const auto eval = Evaluator::harness();
  const auto ok = run_cascade(make("int a = 1;\n", eval), eval);
  CHECK(ok.stage == Stage::retrieved);
  CHECK(ok.patches.empty());

  for (const std::string text : {kFig2Snippet, std::string("class A { static void f(){ int x = 1 } }"),
                                 std::string("int a = 1;\nb = a +;\nfoo(;\n}\n")}) {
    const auto c = run_cascade(make(text, eval), eval);
    check_monotone(c);
    check_replay(c);
  }
}

TEST_CASE("context changes the error count") {
  const frontend::SourceUnit ctx("public class Main {\n  public static void main(String[] args) {\n    int count = 0;\n    \n  }\n}\n");
  const Evaluator in_ctx(ctx, {4, 5});
  const auto eval = Evaluator::harness();
  const std::string snippet = "int count = 1;\n";
  CHECK(in_ctx.error_count({}, snippet) > eval.error_count({}, snippet));
}
