#include <algorithm>
#include <chrono>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "snipfit/error.hpp"
#include "snipfit/frontend/parser.hpp"
#include "snipfit/pipeline/session.hpp"
#include "snipfit/repair/cascade.hpp"
#include "snipfit/testkit/testkit.hpp"

using namespace snipfit;
using namespace snipfit::testkit;

namespace {

const repair::Evaluator& harness() {
  static const repair::Evaluator eval(frontend::SourceUnit(pipeline::harness_context()), pipeline::harness_cursor());
  return eval;
}

repair::Candidate make(const std::string& text, int rank = 0, corpus::PostId answer = 10, bool repair = true) {
  auto c = repair::Candidate::from_snippet(corpus::RawSnippet{answer, 1, 0, text, 3}, rank);
  if (!repair) {
    harness().refresh(c);
    return c;
  }
  return repair::run_cascade(std::move(c), harness());
}

TypeSignature sig(std::vector<std::string> args, std::string ret) {
  TypeSignature s;
  s.arg_types = std::move(args);
  s.ret_type = std::move(ret);
  return s;
}

std::string squeeze(const std::string& s) { return std::regex_replace(s, std::regex("\\s+"), ""); }

// Independent scan: name assigned by the textually last `name =` or
// `T name =` in the snippet.
std::string last_assigned_name(const std::string& body) {
  static const std::regex re(R"(([A-Za-z_]\w*)\s*(?:[-+*/%]?=)(?!=))");
  std::string last;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), re); it != std::sregex_iterator(); ++it) {
    last = (*it)[1];
  }
  return last;
}

std::string declared_type(const std::string& body, const std::string& name) {
  std::smatch m;
  const std::regex re("([A-Za-z_][\\w\\[\\]]*)\\s+" + name + "\\s*=");
  return std::regex_search(body, m, re) ? m[1].str() : "";
}

const std::string kFig4 =
    "import com.google.common.primitives.Ints;\n"
    "import java.util.Optional;\n"
    "String myString = \"empty\";\n"
    "int foo = 0;\n"
    "foo = Optional\n"
    "     .ofNullable(Ints.tryParse(myString))\n"
    "     .orElse(0);\n";

}  // namespace

TEST_CASE("signature text round trip") {
  const auto s = sig({"String", "int"}, "boolean");
  CHECK(to_string(s) == "(String, int)->boolean");
  auto user = sig({"String", "int"}, "boolean");
  user.source = SignatureSource::user;
  CHECK(parse_signature("(String, int)->boolean") == user);
  CHECK(parse_signature(" ( char )->char ").arg_types == std::vector<std::string>{"char"});
  CHECK_THROWS_AS(parse_signature("String->int"), Error);
  CHECK_THROWS_AS(parse_signature("()->int"), Error);
  CHECK_THROWS_AS(parse_signature("(int)->"), Error);
  const auto j = to_json(s);
  CHECK(j.at("text") == "(String, int)->boolean");
  CHECK(signature_from_json(j) == s);
  CHECK(to_string(signature_from_json(nlohmann::json("(int)->int"))) == "(int)->int");
  CHECK_THROWS_AS(signature_from_json(nlohmann::json{{"args", nlohmann::json::array()}, {"ret", "int"}}), Error);
  CHECK_THROWS_AS(signature_from_json(nlohmann::json(5)), Error);
}

TEST_CASE("type suggestions for the three example tasks") {
  const auto split = make("String text = \"a b  c\";\nString[] words = text.split(\"\\\\s+\");\n");
  REQUIRE(split.error_count == 0);
  REQUIRE(suggest_types(split));
  CHECK(to_string(*suggest_types(split)) == "(String)->String[]");

  const auto parse = make(kFig4);
  REQUIRE(parse.error_count == 0);
  REQUIRE(suggest_types(parse));
  CHECK(to_string(*suggest_types(parse)) == "(String)->int");

  const auto lower = make("char c = 'A';\nchar lower = Character.toLowerCase(c);\n");
  REQUIRE(lower.error_count == 0);
  REQUIRE(suggest_types(lower));
  CHECK(to_string(*suggest_types(lower)) == "(char)->char");
}

TEST_CASE("type suggestion edge cases") {
  CHECK_FALSE(suggest_types(make("int x = 5;\n")));
  CHECK_FALSE(suggest_types(make("int x = ;\n")));  // not compilable
  // Return variable from the last assignment, even inside a loop.
  const auto loop = make("String s = \"abc\";\nint count = 0;\nfor (int i = 0; i < s.length(); i++) {\n    count += 1;\n}\n");
  REQUIRE(loop.error_count == 0);
  CHECK(to_string(*suggest_types(loop)) == "(String)->int");
  // All other declared variables become arguments.
  const auto many = make("int a = 1;\nlong b = 2;\nString c = \"x\";\nboolean r = a > b;\n");
  REQUIRE(many.error_count == 0);
  CHECK(to_string(*suggest_types(many)) == "(int, long, String)->boolean");
  CHECK(to_string(*suggest_types(many, 1)) == "(int)->boolean");
}

TEST_CASE("suggested return variable matches an independent scan") {
  const std::vector<std::string> bodies{
      kFig4,
      "int a = 1;\nint b = 2;\nb = a + b;\n",
      "int a = 1;\nint b = 2;\na = b * 2;\n",
      "String s = \"x\";\nString t = s + s;\nint n = t.length();\n",
      "double d = 1.5;\nint k = 2;\nd = d * k;\n",
  };
  for (const auto& body : bodies) {
    const auto c = make(body);
    REQUIRE(c.error_count == 0);
    const auto s = suggest_types(c);
    REQUIRE(s);
    CHECK_MESSAGE(s->ret_type == declared_type(c.body, last_assigned_name(c.body)), body);
    CHECK_MESSAGE(synthesize_function(c, *s), body);
  }
}

TEST_CASE("testable function from the introductory snippet") {
  const auto c = make(kFig4);
  const auto fn = synthesize_function(c, sig({"String"}, "int"));
  REQUIRE(fn);
  CHECK(fn->arg_vars == std::vector<std::string>{"myString"});
  CHECK(fn->return_var == "foo");
  CHECK(fn->source ==
        "public static int snippet(String myString){\n"
        "    int foo = 0;\n"
        "    foo = Optional\n"
        "         .ofNullable(Ints.tryParse(myString))\n"
        "         .orElse(0);\n"
        "    return foo;\n"
        "}\n");
  const auto skeleton = generate_test_skeleton(sig({"String"}, "int"));
  const auto r = runtime::run_test(fn->imports, fn->source, skeleton.source);
  CHECK_MESSAGE(r.status == runtime::RunStatus::passed, r.detail);

  CHECK_FALSE(synthesize_function(c, sig({"double"}, "int")));
  CHECK_FALSE(synthesize_function(c, sig({"String", "String"}, "int")));
  CHECK_FALSE(synthesize_function(c, sig({"String"}, "boolean")));
}

TEST_CASE("synthesis binds arguments from the top and keeps other declarators") {
  const auto c = make("int a = 1, b = 2;\nint c = a + b;\n");
  REQUIRE(c.error_count == 0);
  const auto fn = synthesize_function(c, sig({"int"}, "int"));
  REQUIRE(fn);
  CHECK(fn->arg_vars == std::vector<std::string>{"a"});
  CHECK(fn->return_var == "c");
  CHECK(fn->source == "public static int snippet(int a){\n    int b = 2;\n    int c = a + b;\n    return c;\n}\n");
  const auto r = runtime::run_test("", fn->source, "@Test\npublic void t(){\n    assertEquals(snippet(5), 7);\n}");
  CHECK_MESSAGE(r.status == runtime::RunStatus::passed, r.detail);
}

TEST_CASE("synthesis that does not re-check is absent") {
  // A bare `return;` is fine inside main but not in a function returning int.
  const auto c = make("String s = \"x\";\nint n = s.length();\nif (n > 5) {\n    return;\n}\n");
  REQUIRE(c.error_count == 0);
  REQUIRE(suggest_types(c));
  CHECK_FALSE(synthesize_function(c, *suggest_types(c)));
  // Not enough variables of the requested types.
  const auto few = make("int x = 1;\nint y = x;\nint z = y;\n");
  REQUIRE(few.error_count == 0);
  CHECK(synthesize_function(few, sig({"int", "int"}, "int")));
  CHECK_FALSE(synthesize_function(few, sig({"int", "int", "int"}, "int")));
}

TEST_CASE("test skeleton and default values") {
  const auto t = generate_test_skeleton(sig({"String"}, "int"));
  CHECK(t.source == "@Test\npublic void testSnippet(){\n    assertEquals(snippet(\"empty\"), 0);\n}");
  CHECK(squeeze(t.source).find("assertEquals(snippet(\"empty\"),0);") != std::string::npos);
  CHECK(t.editable);
  CHECK(check_test(t, sig({"String"}, "int")).empty());

  CHECK(squeeze(generate_test_skeleton(sig({"int"}, "boolean")).source).find("assertEquals(snippet(0),false);") !=
        std::string::npos);
  CHECK(default_value("String") == "\"empty\"");
  CHECK(default_value("int") == "0");
  CHECK(default_value("long") == "0");
  CHECK(default_value("double") == "0.0");
  CHECK(default_value("boolean") == "false");
  CHECK(default_value("char") == "'a'");
  CHECK(default_value("String[]") == "new String[0]");
  CHECK_THROWS_AS(default_value("Foo"), Error);
  CHECK_THROWS_AS(generate_test_skeleton(sig({"Foo"}, "int")), Error);

  // Every supported signature's skeleton checks against its stub.
  const std::vector<std::string> types{"String", "int", "long", "double", "float", "boolean", "char", "String[]", "int[]"};
  for (const auto& a : types) {
    for (const auto& r : types) {
      const auto s = sig({a}, r);
      CHECK_MESSAGE(check_test(generate_test_skeleton(s), s).empty(), to_string(s));
    }
  }
  CHECK(check_test(generate_test_skeleton(sig({"int", "char", "double"}, "String")), sig({"int", "char", "double"}, "String"))
            .empty());
  CHECK_FALSE(check_test(TestCase{"@Test\npublic void t(){\n    assertEquals(snippet(1), 0);\n}", true},
                         sig({"String"}, "int"))
                  .empty());
}

TEST_CASE("testing re-ranks passing candidates first") {
  pipeline::TaskSession session("convert string to int", frontend::SourceUnit(pipeline::harness_context()),
                                pipeline::harness_cursor());
  const std::vector<std::string> bodies{
      "String s = \"5\";\nint n = 7;\n",                              // wrong constant
      "String s = \"5\";\nint n = Integer.parseInt(s);\n",            // correct
      "String s = \"5\";\nint n = 0;\nwhile (n >= 0) {\n    n = n * 1;\n}\n",  // spins
      "int only = 1;\n",                                              // no string variable
      "String t = \"1\";\nint v = Integer.parseInt(t);\n",            // correct
      "String s = \"5\"\nint n = Integer.parseInt(q) +;\n",           // errors, left unrepaired
  };
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    session.add(make(bodies[i], static_cast<int>(i), static_cast<corpus::PostId>(100 + i), i + 1 < bodies.size()));
  }
  std::vector<std::string> before;
  for (const auto& e : session.snapshot().entries) before.push_back(e.candidate.id);

  TestOptions opts;
  opts.budget.wall = std::chrono::milliseconds(200);
  const auto test = TestCase{"@Test\npublic void t(){\n    assertEquals(snippet(\"42\"), 42);\n}", true};
  const auto results = test_candidates(session, test, sig({"String"}, "int"), opts);

  std::map<std::string, std::string> status;
  for (const auto& [id, rec] : results) status[id] = rec.status;
  CHECK(status["100:0"] == "failed");
  CHECK(status["101:0"] == "passed");
  CHECK(status["102:0"] == "timeout");
  CHECK(status["103:0"] == "not_synthesized");
  CHECK(status["104:0"] == "passed");
  CHECK(status.count("105:0") == 0);

  // Oracle: passing ids in their previous order, then everything else in
  // its previous order.
  std::vector<std::string> expected;
  for (const auto& id : before) {
    if (status.count(id) && status[id] == "passed") expected.push_back(id);
  }
  for (const auto& id : before) {
    if (!status.count(id) || status[id] != "passed") expected.push_back(id);
  }
  const auto snap = session.snapshot();
  std::vector<std::string> after;
  for (const auto& e : snap.entries) after.push_back(e.candidate.id);
  CHECK(after == expected);
  CHECK(snap.tested);
  CHECK(snap.cursor_index == 0);
  CHECK(snap.entries[0].test->status == "passed");

  // A failing test for everyone keeps the order.
  const auto none = TestCase{"@Test\npublic void t(){\n    assertEquals(snippet(\"1\"), -99);\n}", true};
  test_candidates(session, none, sig({"String"}, "int"), opts);
  std::vector<std::string> unchanged;
  for (const auto& e : session.snapshot().entries) unchanged.push_back(e.candidate.id);
  CHECK(unchanged == before);

  CHECK_THROWS_AS(test_candidates(session, TestCase{"@Test\npublic void t(){ snippet(1); }", true},
                                  sig({"String"}, "int"), opts),
                  Error);
}

TEST_CASE("session suggestions are counted over compilable candidates") {
  pipeline::TaskSession session("t", frontend::SourceUnit(pipeline::harness_context()), pipeline::harness_cursor());
  session.add(make("String s = \"5\";\nint n = Integer.parseInt(s);\n", 0, 1));
  session.add(make("char c = 'A';\nchar d = Character.toLowerCase(c);\n", 1, 2));
  session.add(make("String t = \"1\";\nint v = Integer.parseInt(t);\n", 2, 3));
  const auto s = suggest_for_session(session);
  REQUIRE(s.size() == 2);
  CHECK(to_string(s[0]) == "(String)->int");
  CHECK(to_string(s[1]) == "(char)->char");
  CHECK(suggest_for_session(session, 1).size() == 1);
}
