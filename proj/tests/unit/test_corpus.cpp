#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "snipfit/corpus/index.hpp"
#include "snipfit/corpus/porter.hpp"
#include "snipfit/error.hpp"

using namespace snipfit;
using namespace snipfit::corpus;

namespace {

std::vector<std::string> processed(std::string_view text, KeywordMode mode, bool omit) {
  std::vector<std::string> out;
  for (const auto& k : process_keywords(text, mode, omit)) out.push_back(k.processed);
  return out;
}

CorpusDoc question(PostId id, std::string title) {
  CorpusDoc d;
  d.id = id;
  d.title = std::move(title);
  d.body = "?";
  return d;
}

CorpusDoc answer(PostId id, PostId parent, std::string body, int score = 0) {
  CorpusDoc d;
  d.id = id;
  d.kind = DocKind::answer;
  d.parent_id = parent;
  d.body = std::move(body);
  d.score = score;
  return d;
}

std::set<PostId> matches(const InvertedIndex& idx, const std::string& task) {
  const auto v = idx.matching_questions(task);
  return {v.begin(), v.end()};
}

bool subset(const std::set<PostId>& a, const std::set<PostId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Inflected forms, stop words and content words, so every mode makes a difference.
const std::vector<std::string> kVocab = {
    "convert", "converting", "converts", "conversion", "string", "strings", "int", "integer", "split",
    "splitting", "splits", "whitespace", "whitespaces", "reverse", "reversing", "reversed", "array", "arrays",
    "sort", "sorting", "sorted", "file", "files", "read", "reading", "children", "child", "index", "indices",
    "list", "lists", "the", "a", "to", "in", "how", "java", "of", "by", "is", "an", "do", "i"};
const std::vector<std::string> kContent = {"convert", "string", "split", "array", "sort", "file", "list",
                                           "reverse", "child", "index", "integer", "reading"};

std::string random_text(std::mt19937& rng, int min_words, int max_words) {
  std::uniform_int_distribution<int> len(min_words, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, kVocab.size() - 1);
  std::string s;
  for (int n = len(rng); n > 0; --n) s += (s.empty() ? "" : " ") + kVocab[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("porter stemmer reproduces the reference vocabulary") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"caresses", "caress"},   {"ponies", "poni"},         {"ties", "ti"},           {"caress", "caress"},
      {"cats", "cat"},          {"feed", "feed"},           {"agreed", "agre"},       {"plastered", "plaster"},
      {"bled", "bled"},         {"motoring", "motor"},      {"sing", "sing"},         {"conflated", "conflat"},
      {"troubled", "troubl"},   {"sized", "size"},          {"hopping", "hop"},       {"tanned", "tan"},
      {"falling", "fall"},      {"hissing", "hiss"},        {"fizzed", "fizz"},       {"failing", "fail"},
      {"filing", "file"},       {"happy", "happi"},         {"sky", "sky"},           {"relational", "relat"},
      {"conditional", "condit"}, {"rational", "ration"},    {"valenci", "valenc"},    {"digitizer", "digit"},
      {"conformabli", "conform"}, {"radicalli", "radic"},   {"differentli", "differ"}, {"vileli", "vile"},
      {"analogousli", "analog"}, {"vietnamization", "vietnam"}, {"predication", "predic"}, {"operator", "oper"},
      {"feudalism", "feudal"},  {"decisiveness", "decis"},  {"hopefulness", "hope"},  {"callousness", "callous"},
      {"formaliti", "formal"},  {"sensitiviti", "sensit"},  {"sensibiliti", "sensibl"}, {"triplicate", "triplic"},
      {"formative", "form"},    {"formalize", "formal"},    {"electriciti", "electr"}, {"electrical", "electr"},
      {"hopeful", "hope"},      {"goodness", "good"},       {"revival", "reviv"},     {"allowance", "allow"},
      {"inference", "infer"},   {"airliner", "airlin"},     {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"},
      {"defensible", "defens"}, {"irritant", "irrit"},      {"replacement", "replac"}, {"adjustment", "adjust"},
      {"dependent", "depend"},  {"adoption", "adopt"},      {"homologou", "homolog"}, {"communism", "commun"},
      {"activate", "activ"},    {"angulariti", "angular"},  {"homologous", "homolog"}, {"effective", "effect"},
      {"bowdlerize", "bowdler"}, {"probate", "probat"},     {"rate", "rate"},         {"cease", "ceas"},
      {"controll", "control"},  {"roll", "roll"},           {"generalizations", "gener"}, {"oscillators", "oscil"},
      {"is", "is"},             {"a", "a"}};
  for (const auto& [word, stem] : cases) {
    CAPTURE(word);
    CHECK(porter_stem(word) == stem);
  }
}

TEST_CASE("stem_fixed is a fixed point of the stemmer") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> letter('a', 'z'), len(1, 12);
  for (int i = 0; i < 2000; ++i) {
    std::string w;
    for (int n = len(rng); n > 0; --n) w += static_cast<char>(letter(rng));
    const auto s = stem_fixed(w);
    CAPTURE(w);
    CHECK(porter_stem(s) == s);
  }
}

TEST_CASE("keyword processing of example titles") {
  CHECK(processed("How to convert string to int in Java?", KeywordMode::lemma, true) ==
        std::vector<std::string>{"convert", "string", "int"});
  CHECK(processed("Splitting a string by whitespaces", KeywordMode::stem, true) ==
        std::vector<std::string>{"split", "string", "whitespac"});
  CHECK(processed("Splitting a string by whitespaces", KeywordMode::none, true) ==
        std::vector<std::string>{"splitting", "string", "whitespaces"});
  CHECK(processed("How to convert string to int in Java?", KeywordMode::none, false) ==
        std::vector<std::string>{"how", "to", "convert", "string", "int", "in", "java"});
  CHECK(processed("the a of in", KeywordMode::lemma, true).empty());
  CHECK(processed("children", KeywordMode::lemma, true) == processed("child", KeywordMode::lemma, true));
  CHECK(processed("children", KeywordMode::stem, true) != processed("child", KeywordMode::stem, true));

  const auto surface = process_keywords("Reversing the characters", KeywordMode::stem, true);
  REQUIRE(surface.size() == 2);
  CHECK(surface[0].surface == "reversing");
  CHECK(tokenize("Don't  stop'  C++ & x_1!") == std::vector<std::string>{"don't", "stop", "c", "x_1"});
  CHECK_THROWS_AS(parse_keyword_mode("fuzzy"), Error);
}

TEST_CASE("keyword processing is idempotent") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto text = random_text(rng, 1, 8);
    for (const auto mode : {KeywordMode::none, KeywordMode::stem, KeywordMode::lemma}) {
      for (const bool omit : {false, true}) {
        const auto once = processed(text, mode, omit);
        std::string joined;
        for (const auto& k : once) joined += k + " ";
        CAPTURE(text);
        CHECK(processed(joined, mode, omit) == once);
      }
    }
  }
}

TEST_CASE("retrieval is monotone across keyword options on random corpora") {
  std::mt19937 rng(2024);
  for (int corpus_n = 0; corpus_n < 100; ++corpus_n) {
    std::vector<CorpusDoc> docs;
    for (PostId q = 1; q <= 30; ++q) docs.push_back(question(q, random_text(rng, 2, 7)));
    std::vector<std::string> tasks;
    std::uniform_int_distribution<std::size_t> content(0, kContent.size() - 1);
    for (int t = 0; t < 10; ++t) tasks.push_back(kContent[content(rng)] + " " + random_text(rng, 0, 3));

    std::map<std::pair<int, bool>, InvertedIndex> idx;
    for (const int m : {0, 1, 2}) {
      for (const bool omit : {false, true}) idx[{m, omit}] = build_index(docs, {static_cast<KeywordMode>(m), omit});
    }
    for (const auto& task : tasks) {
      CAPTURE(task);
      for (const bool omit : {false, true}) {
        CHECK(subset(matches(idx[{0, omit}], task), matches(idx[{1, omit}], task)));
        CHECK(subset(matches(idx[{1, omit}], task), matches(idx[{2, omit}], task)));
      }
      for (const int m : {0, 1, 2}) CHECK(subset(matches(idx[{m, false}], task), matches(idx[{m, true}], task)));
    }
  }
}

TEST_CASE("query orders snippets by answer score, answer id and block") {
  const std::vector<CorpusDoc> docs = {
      question(1, "Convert string to int"),
      question(2, "Reverse a list"),
      answer(10, 1, "```\nint a = 1;\n```\ntext\n```\nint b = 2;\n```", 1),
      answer(11, 1, "```\nint c = 3;\n```", 5),
      answer(12, 1, "```\nint d = 4;\n```", 1),
      answer(13, 2, "```\nint e = 5;\n```", 9),
      answer(14, 1, "no code here", 7),
  };
  const auto idx = build_index(docs, {});
  const auto snippets = idx.query("convert string to int?");
  std::vector<std::pair<PostId, int>> got;
  for (const auto& s : snippets) got.emplace_back(s.source_answer, s.block_index);
  CHECK(got == std::vector<std::pair<PostId, int>>{{11, 0}, {10, 0}, {10, 1}, {12, 0}});
  CHECK(snippets[0].text == "int c = 3;");
  CHECK(snippets[0].question_id == 1);
  CHECK(idx.answers_of(1) == std::vector<PostId>{10, 11, 12, 14});
  CHECK(idx.query("parse xml").empty());

  try {
    (void)idx.query("the of to");
    FAIL("expected empty_query");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_query);
  }
}

TEST_CASE("snippet extraction") {
  auto d = answer(5, 1, "intro\n```\nint x = 1;\n```\n```\n   \n\t\n```\n```java\nint y;\n```\n```\nint z;");
  const auto s = extract_snippets(d);
  REQUIRE(s.size() == 3);
  CHECK(s[0].text == "int x = 1;");
  CHECK(s[0].block_index == 0);
  CHECK(s[1].text == "int y;");
  CHECK(s[1].block_index == 1);
  CHECK(s[2].text == "int z;");
  CHECK(extract_snippets(question(1, "t")).empty());
}

TEST_CASE("ingest errors") {
  IndexBuilder b({});
  b.add(question(1, "Sort an array"));
  try {
    b.add(question(1, "Sort a list"));
    FAIL("expected ingest error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ingest);
  }

  IndexBuilder orphan({});
  orphan.add(answer(2, 99, "```\nint x;\n```"));
  CHECK_THROWS_AS((void)std::move(orphan).finish(), Error);

  IndexBuilder untitled({});
  CHECK_THROWS_AS(untitled.add(question(3, "")), Error);

  std::istringstream bad("{\"id\": 1, \"kind\": \"question\", \"title\": \"x\", \"body\": \"\"}\n\n{\"id\": \"two\"}\n");
  try {
    (void)read_corpus(bad);
    FAIL("expected format error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::format);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("index survives a save/load round trip") {
  const auto docs = load_corpus(std::string(SNIPFIT_TEST_DATA_DIR) + "/minicorpus/corpus.jsonl");
  REQUIRE(docs.size() > 20);
  for (const auto& doc : docs) CHECK(doc_from_json(to_json(doc)) == doc);
  const auto idx = build_index(docs, {KeywordMode::stem, false});
  std::stringstream buf;
  idx.save(buf);
  const auto back = InvertedIndex::load(buf);
  CHECK(back.options() == idx.options());
  CHECK(back.postings() == idx.postings());
  CHECK(back.docs() == idx.docs());
  CHECK(back.task_titles() == idx.task_titles());
  CHECK(back.query("convert string to int") == idx.query("convert string to int"));

  std::istringstream junk("not an index");
  CHECK_THROWS_AS(InvertedIndex::load(junk), Error);
}

TEST_CASE("task suggestions") {
  const auto idx = build_index({question(1, "x y")}, {});
  const auto all = idx.suggest_tasks("");
  CHECK(all.size() == 10);
  CHECK(std::equal(all.begin(), all.end(), idx.task_titles().begin()));
  CHECK(idx.suggest_tasks("", 3).size() == 3);

  const auto conv = idx.suggest_tasks("convert string");
  CHECK(std::find(conv.begin(), conv.end(), "convert string to integer") != conv.end());
  for (const auto& t : conv) CHECK(t.find("convert") != std::string::npos);
  CHECK(idx.suggest_tasks("the of to").empty());
  CHECK(idx.suggest_tasks("Splitting strings").front() == "split string by whitespaces");
}
