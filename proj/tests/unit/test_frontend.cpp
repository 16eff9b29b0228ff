#include <random>
#include <string>

#include "doctest.h"
#include "snipfit/frontend/analyzer.hpp"
#include "snipfit/frontend/lexer.hpp"
#include "snipfit/frontend/parser.hpp"

using namespace snipfit::frontend;

namespace {

std::string in_main(const std::string& body, const std::string& imports = "") {
  return imports + "public class Main {\n    public static void main(String[] args) {\n" + body + "\n    }\n}\n";
}

CompileResult run(const std::string& text) { return check(SourceUnit(text)); }

int count(const CompileResult& r, DiagCode code) {
  int n = 0;
  for (const auto& d : r.diagnostics) n += d.code == code ? 1 : 0;
  return n;
}

const Diagnostic* first(const CompileResult& r, DiagCode code) {
  for (const auto& d : r.diagnostics) {
    if (d.code == code) return &d;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("well-formed programs compile without diagnostics") {
  const auto r = run(in_main(
      "        String myString = \"42\";\n"
      "        int foo = Optional.ofNullable(Ints.tryParse(myString)).orElse(0);\n",
      "import java.util.Optional;\nimport com.google.common.primitives.Ints;\n\n"));
  CHECK(r.error_count == 0);

  const auto loops = run(
      "public class A {\n"
      "  static int sum(int[] xs) {\n"
      "    int s = 0;\n"
      "    for (int i = 0; i < xs.length; i++) { s += xs[i]; }\n"
      "    for (int x : xs) s = s + x;\n"
      "    while (s > 100) { s /= 2; if (s == 3) break; }\n"
      "    try { s = Integer.parseInt(\"7\"); } catch (NumberFormatException e) { s = -1; } finally { s++; }\n"
      "    return s;\n"
      "  }\n"
      "  static char up(char c) { return Character.toUpperCase(c); }\n"
      "  static String[] words(String s) { return s.split(\" \"); }\n"
      "}\n");
  CHECK(loops.error_count == 0);
  for (const auto& d : loops.diagnostics) MESSAGE(d.message);
}

TEST_CASE("missing semicolon is reported at the end of the previous token") {
  const auto text = in_main("        int x = 5\n        int y = 6;");
  const auto r = run(text);
  REQUIRE(r.error_count == 1);
  const auto& d = r.diagnostics[0];
  CHECK(d.code == DiagCode::missing_token);
  CHECK(d.hint == std::optional<std::string>(";"));
  CHECK(d.begin == d.end);
  CHECK(text.substr(d.begin - 1, 1) == "5");
  CHECK(d.span.start_line == 3);
}

TEST_CASE("unexpected token on the same line") {
  const auto r = run(in_main("        int x = 5 6;"));
  REQUIRE(r.error_count == 1);
  CHECK(r.diagnostics[0].code == DiagCode::unexpected_token);
  CHECK(r.diagnostics[0].token == std::optional<std::string>("6"));
}

TEST_CASE("undeclared variable carries the inferred type of an assignment") {
  const auto r = run(in_main("        foo = 5;\n        bar = \"s\" + foo;\n        baz(qux);"));
  const auto* d = first(r, DiagCode::undeclared_var);
  REQUIRE(d != nullptr);
  CHECK(d->hint == std::optional<std::string>("foo"));
  CHECK(d->inferred_type == std::optional<std::string>("int"));
  CHECK(count(r, DiagCode::undeclared_var) == 4);  // foo, bar, foo (use), qux
  CHECK(count(r, DiagCode::unresolved) == 1);      // baz
}

TEST_CASE("unresolved types and qualifiers") {
  const auto r = run(in_main("        List x = new ArrayList();\n        int v = Ints.tryParse(\"1\");\n"
                             "        Foo.bar();"));
  CHECK(count(r, DiagCode::unresolved_type) == 3);
  CHECK(count(r, DiagCode::unresolved) == 1);
  const auto* u = first(r, DiagCode::unresolved);
  REQUIRE(u != nullptr);
  CHECK(u->hint == std::optional<std::string>("Foo"));

  const auto imported = run(in_main("        List x = new ArrayList();", "import java.util.List;\nimport java.util.ArrayList;\n"));
  CHECK(imported.error_count == 0);

  const auto bad_import = run(in_main("", "import java.utils.List;\n"));
  REQUIRE(bad_import.error_count == 1);
  CHECK(bad_import.diagnostics[0].code == DiagCode::unresolved);
}

TEST_CASE("structural errors") {
  SUBCASE("nested method") {
    const auto r = run(in_main("        public static int f(int a) { return a; }"));
    CHECK(count(r, DiagCode::nested_method) == 1);
  }
  SUBCASE("missing return") {
    const auto r = run("class A { static int f(int a) { if (a > 0) return 1; } }");
    REQUIRE(r.error_count == 1);
    CHECK(r.diagnostics[0].code == DiagCode::missing_return);
    CHECK(r.diagnostics[0].hint == std::optional<std::string>("f"));
  }
  SUBCASE("no missing return after infinite loop or throw") {
    CHECK(run("class A { static int f() { while (true) { } } }").error_count == 0);
    CHECK(run("class A { static int f() { throw new IllegalStateException(\"x\"); } }").error_count == 0);
    CHECK(run("class A { static int f(int a) { if (a > 0) { return 1; } else { return 2; } } }").error_count == 0);
  }
  SUBCASE("duplicates") {
    CHECK(count(run(in_main("        int a = 1;\n        int a = 2;")), DiagCode::duplicate_member) == 1);
    CHECK(count(run(in_main("        int a = 1;\n        { String a = \"\"; }")), DiagCode::duplicate_member) == 1);
    CHECK(count(run("class A { static void f() {} static void f() {} }"), DiagCode::duplicate_member) == 1);
    CHECK(run("class A { static void f() {} static void f(int x) {} }").error_count == 0);
  }
  SUBCASE("misplaced import") {
    const auto r = run(in_main("        import java.util.List;"));
    REQUIRE(r.error_count == 1);
    CHECK(r.diagnostics[0].code == DiagCode::misplaced_import);
    CHECK(r.diagnostics[0].hint == std::optional<std::string>("java.util.List"));
  }
  SUBCASE("missing brace at end of input") {
    const auto r = run("class A { static void f() { int x = 1; }");
    REQUIRE(r.error_count == 1);
    CHECK(r.diagnostics[0].code == DiagCode::missing_token);
    CHECK(r.diagnostics[0].hint == std::optional<std::string>("}"));
  }
  SUBCASE("missing paren") {
    const auto r = run(in_main("        int x = 1;\n        if (x > 0 { x = 2; }"));
    REQUIRE(r.error_count >= 1);
    CHECK(r.diagnostics[0].code == DiagCode::missing_token);
    CHECK(r.diagnostics[0].hint == std::optional<std::string>(")"));
  }
}

TEST_CASE("typing errors") {
  CHECK(count(run(in_main("        int x = \"s\";")), DiagCode::type_mismatch) == 1);
  CHECK(count(run(in_main("        String s = 1 + 2;")), DiagCode::type_mismatch) == 1);
  CHECK(count(run(in_main("        if (1) { }")), DiagCode::type_mismatch) == 1);
  CHECK(run(in_main("        double d = 1;\n        long l = 'c';\n        char c = 'a' + 1;")).error_count == 0);
  CHECK(count(run(in_main("        int x = Integer.parseInt();")), DiagCode::arity) == 1);
  CHECK(count(run(in_main("        int x = Integer.parseInt(3);")), DiagCode::type_mismatch) == 1);
  CHECK(count(run(in_main("        String s = \"a\";\n        s.fooBar();")), DiagCode::unresolved) == 1);
  CHECK(count(run("class A { static int f(int a) { return a; } static void g() { f(1, 2); } }"), DiagCode::arity) == 1);
}

TEST_CASE("unsupported constructs are parse errors") {
  CHECK(count(run(in_main("        Runnable r = () -> { };")), DiagCode::parse) >= 1);
  CHECK(count(run(in_main("        String s = \"a\";\n        s.chars().forEach(System.out::println);")), DiagCode::parse) >= 1);
  CHECK(count(run(in_main("        int x = 1;\n        switch (x) { case 1: break; }")), DiagCode::parse) == 1);
  CHECK(count(run(in_main("        x + 1;")), DiagCode::parse) == 1);
}

TEST_CASE("spans are one-based with exclusive end") {
  const auto r = run("class A {\n  static void f() {\n    zz = 1;\n  }\n}\n");
  REQUIRE(r.error_count == 1);
  const auto& s = r.diagnostics[0].span;
  CHECK(s.start_line == 3);
  CHECK(s.start_col == 5);
  CHECK(s.end_line == 3);
  CHECK(s.end_col == 7);
}

TEST_CASE("diagnostics are ordered by start offset") {
  const auto r = run(in_main("        a = 1;\n        int b = \"x\"\n        c = 2;"));
  REQUIRE(r.error_count >= 3);
  for (std::size_t i = 1; i < r.diagnostics.size(); ++i) {
    CHECK(r.diagnostics[i - 1].begin <= r.diagnostics[i].begin);
  }
}

TEST_CASE("error nodes always come with diagnostics") {
  const std::string base = in_main(
      "        String s = \"abc\";\n"
      "        int n = s.length() * 2;\n"
      "        for (int i = 0; i < n; i++) { s = s + i; }\n"
      "        System.out.println(s);");
  std::mt19937 rng(1234);
  const std::string alphabet = "(){};=+-<>\"'.,[]x1 \n";
  for (int iter = 0; iter < 400; ++iter) {
    std::string text = base;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < edits; ++k) {
      const auto pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(pos, 1); break;
        case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[pos] = alphabet[rng() % alphabet.size()]; break;
      }
    }
    const SourceUnit unit(text);
    const auto parsed = parse(unit);
    if (parsed.tree.error_nodes > 0) CHECK(!parsed.diagnostics.empty());
  }
}

TEST_CASE("deep nesting and garbage do not crash") {
  std::string deep = "class A { static void f() { int x = ";
  for (int i = 0; i < 5000; ++i) deep += "(";
  deep += "1; } }";
  const auto r = run(deep);
  CHECK(r.error_count >= 1);

  std::string blocks = "class A { static void f() { ";
  for (int i = 0; i < 3000; ++i) blocks += "{";
  CHECK(run(blocks).error_count >= 1);

  std::mt19937 rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    std::string junk;
    for (int i = 0; i < 200; ++i) junk.push_back(static_cast<char>(rng() % 256));
    (void)run(junk);
  }
}

TEST_CASE("statement sequences parse with body-relative offsets") {
  const auto r = parse_statements("int x = 1;\nx++;\n");
  CHECK(r.diagnostics.empty());
  REQUIRE(r.statements.size() == 2);
  CHECK(r.statements[1]->range.begin == 11);
}
