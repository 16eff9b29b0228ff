#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "snipfit/bench/bench.hpp"
#include "snipfit/error.hpp"

using namespace snipfit;
using namespace snipfit::bench;
using nlohmann::json;

namespace {

const std::string kData = SNIPFIT_TEST_DATA_DIR;

const std::vector<corpus::CorpusDoc>& mini_corpus() {
  static const auto docs = corpus::load_corpus(kData + "/minicorpus/corpus.jsonl");
  return docs;
}

const std::vector<BenchTask>& mini_tasks() {
  static const auto tasks = load_tasks(kData + "/minicorpus/tasks.jsonl");
  return tasks;
}

const json& mini_report() {
  static const json j = to_json(run_eval(mini_corpus(), mini_tasks()));
  return j;
}

corpus::CorpusDoc doc(corpus::PostId id, std::optional<corpus::PostId> parent, std::string text) {
  corpus::CorpusDoc d;
  d.id = id;
  d.parent_id = parent;
  if (parent) {
    d.kind = corpus::DocKind::answer;
    d.body = std::move(text);
  } else {
    d.title = std::move(text);
    d.body = "?";
  }
  return d;
}

}  // namespace

TEST_CASE("task list parsing") {
  std::istringstream ok(
      "{\"task\": \"a b\"}\n\n"
      "{\"task\": \"c d\", \"signature\": \"(String)->int\", \"test\": \"@Test\\npublic void t(){}\"}\n");
  const auto tasks = read_tasks(ok);
  REQUIRE(tasks.size() == 2);
  CHECK_FALSE(tasks[0].signature);
  REQUIRE(tasks[1].signature);
  CHECK(testkit::to_string(*tasks[1].signature) == "(String)->int");

  for (const std::string bad : {"{\"task\": 3}", "{\"task\": \"x\", \"signature\": \"(int)->int\"}",
                                "{\"task\": \"x\", \"signature\": \"nonsense\", \"test\": \"t\"}", "[1, 2"}) {
    std::istringstream in("{\"task\": \"fine\"}\n" + bad + "\n");
    CAPTURE(bad);
    try {
      (void)read_tasks(in);
      FAIL("expected a format error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::format);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("two runs produce byte-identical reports") {
  const auto again = to_json(run_eval(mini_corpus(), mini_tasks()));
  CHECK(mini_report().dump(2) == again.dump(2));
  CHECK(json_diff(mini_report(), again).empty());
}

TEST_CASE("report matches the committed golden file") {
  std::ifstream in(kData + "/golden/report.json");
  REQUIRE(in);
  const auto golden = json::parse(in);
  const auto diff = json_diff(golden, mini_report());
  for (const auto& d : diff) MESSAGE(d);
  CHECK(diff.empty());
}

TEST_CASE("stage counts never decrease") {
  const auto& r = mini_report();
  REQUIRE(r["tasks"].size() == mini_tasks().size());
  for (const auto& t : r["tasks"]) {
    CAPTURE(t["task"].get<std::string>());
    const auto init = t["initial_compilable"].get<int>();
    const auto integ = t["after_integration"].get<int>();
    const auto fixes = t["after_fixes"].get<int>();
    const auto del = t["after_deletion"].get<int>();
    CHECK(init <= integ);
    CHECK(integ <= fixes);
    CHECK(fixes <= del);
    CHECK(del <= t["retrieved"].get<int>());
    CHECK(t["type_suggestible"].get<int>() <= del);
  }
  CHECK(r["monotonicity_violations"] == 0);
}

TEST_CASE("deletion comparison has eight rows, bottom-up at least top-down") {
  const auto& rows = mini_report()["deletion_variants"];
  REQUIRE(rows.size() == 8);
  CHECK(rows[0]["config"] == "bottom_up/multi/non_strict");
  std::map<std::string, int> by;
  for (const auto& row : rows) by[row["config"].get<std::string>()] = row["compilable"].get<int>();
  CHECK(by.size() == 8);
  for (const auto* rest : {"/multi/non_strict", "/multi/strict", "/single/non_strict", "/single/strict"}) {
    CAPTURE(rest);
    CHECK(by[std::string("bottom_up") + rest] >= by[std::string("top_down") + rest]);
  }
  CHECK(by["bottom_up/multi/non_strict"] == mini_report()["totals"]["after_deletion"].get<int>());
}

TEST_CASE("oracle rows never beat the exhaustive minimum") {
  const auto& o = mini_report()["oracle"];
  CHECK(o["fixtures"].get<int>() > 0);
  for (const auto& row : o["configs"]) {
    CHECK(row["below_minimum"] == 0);
    CHECK(row["attained"].get<int>() <= o["fixtures"].get<int>());
  }
}

TEST_CASE("an empty task list gives an empty report") {
  const auto r = run_eval(mini_corpus(), {});
  CHECK(r.tasks.empty());
  CHECK(r.histogram.empty());
  CHECK(r.totals.retrieved == 0);
  CHECK(r.monotonicity_violations == 0);
  for (const auto& row : r.retrieval) {
    for (const auto n : row) CHECK(n == 0);
  }
  CHECK(r.deletion_variants.size() == 8);
  for (const auto& row : r.deletion_variants) CHECK(row.compilable == 0);
  CHECK_FALSE(to_text(r).empty());
}

TEST_CASE("a single missing semicolon makes a one-bar histogram") {
  const std::vector<corpus::CorpusDoc> docs = {doc(1, std::nullopt, "Sum two numbers"),
                                               doc(2, 1, "```\nint a = 1\nint b = a + 2;\n```")};
  const auto r = run_eval(docs, {BenchTask{"sum two numbers", std::nullopt, std::nullopt}});
  const auto j = to_json(r);
  REQUIRE(j["error_histogram"].size() == 1);
  CHECK(j["error_histogram"][0]["code"] == "E_MISSING_TOKEN");
  CHECK(j["error_histogram"][0]["count"] == 1);
  CHECK(j["tasks"][0]["initial_compilable"] == 0);
  CHECK(j["tasks"][0]["after_fixes"] == 1);
}

TEST_CASE("json_diff reports pointer paths") {
  const json a = {{"x", 1}, {"y", {1, 2}}, {"z", {{"k", "v"}}}};
  json b = a;
  b["y"][1] = 3;
  b["z"]["k"] = "w";
  b["extra"] = true;
  const auto d = json_diff(a, b);
  CHECK(d == std::vector<std::string>{"/extra", "/y/1", "/z/k"});
  CHECK(json_diff(a, a).empty());
}
