#include <dlfcn.h>
#include <fcntl.h>

#include <atomic>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "snipfit/corpus/index.hpp"
#include "snipfit/error.hpp"
#include "snipfit/pipeline/session.hpp"

using namespace snipfit;
using namespace snipfit::pipeline;

// File-open interposition: while `g_audit` is set, every open through libc is counted.
namespace {
std::atomic<bool> g_audit{false};
std::atomic<int> g_opens{0};

template <typename Fn>
Fn next(const char* name) {
  return reinterpret_cast<Fn>(dlsym(RTLD_NEXT, name));
}

void note() {
  if (g_audit) ++g_opens;
}
}  // namespace

extern "C" {
int open(const char* path, int flags, ...) {
  note();
  va_list ap;
  va_start(ap, flags);
  const auto mode = static_cast<mode_t>(va_arg(ap, int));
  va_end(ap);
  static const auto real = next<int (*)(const char*, int, ...)>("open");
  return real(path, flags, mode);
}
int open64(const char* path, int flags, ...) {
  note();
  va_list ap;
  va_start(ap, flags);
  const auto mode = static_cast<mode_t>(va_arg(ap, int));
  va_end(ap);
  static const auto real = next<int (*)(const char*, int, ...)>("open64");
  return real(path, flags, mode);
}
int openat(int dir, const char* path, int flags, ...) {
  note();
  va_list ap;
  va_start(ap, flags);
  const auto mode = static_cast<mode_t>(va_arg(ap, int));
  va_end(ap);
  static const auto real = next<int (*)(int, const char*, int, ...)>("openat");
  return real(dir, path, flags, mode);
}
int creat(const char* path, mode_t mode) {
  note();
  static const auto real = next<int (*)(const char*, mode_t)>("creat");
  return real(path, mode);
}
FILE* fopen(const char* path, const char* mode) {
  note();
  static const auto real = next<FILE* (*)(const char*, const char*)>("fopen");
  return real(path, mode);
}
FILE* fopen64(const char* path, const char* mode) {
  note();
  static const auto real = next<FILE* (*)(const char*, const char*)>("fopen64");
  return real(path, mode);
}
}

namespace {

const corpus::InvertedIndex& mini_index() {
  static const auto idx =
      corpus::build_index(corpus::load_corpus(std::string(SNIPFIT_TEST_DATA_DIR) + "/minicorpus/corpus.jsonl"), {});
  return idx;
}

std::unique_ptr<TaskSession> run(const std::string& task, SessionOptions opts = {}) {
  auto s = std::make_unique<TaskSession>(task, harness_context(), harness_cursor(), opts);
  process_task(*s, mini_index());
  return s;
}

repair::Candidate fake(const std::string& id, int errors, int rank, bool degenerate = false) {
  repair::Candidate c;
  c.id = id;
  c.source_answer = std::stoll(id);
  c.error_count = errors;
  c.retrieval_rank = rank;
  c.degenerate = degenerate;
  c.body = degenerate ? "" : "int x" + id + " = 0;\n";
  return c;
}

std::vector<std::string> ids(const TaskSession& s) {
  std::vector<std::string> out;
  for (const auto& e : s.snapshot().entries) out.push_back(e.candidate.id);
  return out;
}

}  // namespace

TEST_CASE("normalize_task trims whitespace and question marks") {
  CHECK(normalize_task("  convert string to int?? \n") == "convert string to int");
  CHECK(normalize_task("???") == "");
  CHECK(normalize_task("what? now") == "what? now");
}

TEST_CASE("convert string to int presents a compiling candidate first") {
  const auto s = run("convert string to int?");
  const auto snap = s->snapshot();
  CHECK(snap.status == SessionStatus::complete);
  CHECK(snap.retrieved == mini_index().query("convert string to int").size());
  REQUIRE(snap.entries.size() == snap.retrieved);
  CHECK(snap.cursor_index == 0);
  CHECK(snap.entries[0].candidate.error_count == 0);
  CHECK_FALSE(snap.entries[0].candidate.degenerate);
  for (std::size_t i = 1; i < snap.entries.size(); ++i) CHECK_FALSE(rank_less(snap.entries[i], snap.entries[i - 1]));
  const auto& body = snap.entries[0].candidate.body;
  const auto first = body.find_first_not_of(" \n");
  const auto line = body.substr(first, body.find('\n', first) - first);
  CHECK(s->preview().find(line) != std::string::npos);
}

TEST_CASE("statuses for empty and unmatched queries") {
  const auto empty = run("how to do it in java?");
  CHECK(empty->status() == SessionStatus::empty_query);
  CHECK(empty->size() == 0);
  CHECK(empty->preview() == harness_context().text());
  CHECK_THROWS_AS(empty->cycle(1), Error);

  const auto none = run("parse xml attributes");
  CHECK(none->status() == SessionStatus::no_results);
  const auto j = to_json(*none);
  CHECK(j["presented"].is_null());
  CHECK(j["status"] == "no_results");
}

TEST_CASE("cycling wraps in both directions") {
  TaskSession s("t", harness_context(), harness_cursor());
  for (const auto* id : {"3", "1", "2"}) s.add(fake(id, 0, std::stoi(id)));
  CHECK(ids(s) == std::vector<std::string>{"1", "2", "3"});
  CHECK(s.cycle(-1) == 2);
  CHECK(s.cycle(+1) == 0);
  CHECK(s.cycle(+1) == 1);
  CHECK(s.cycle(+1) == 2);
  CHECK(s.cycle(+1) == 0);
  CHECK(s.cycle(-1) == 2);
  CHECK(s.cycle(-1) == 1);
}

TEST_CASE("arrivals keep the best presented until the user cycles") {
  TaskSession s("t", harness_context(), harness_cursor());
  s.add(fake("5", 3, 0));
  s.add(fake("6", 0, 1));
  CHECK(s.snapshot().cursor_index == 0);
  CHECK(ids(s).front() == "6");
  s.cycle(+1);  // now presenting "5"
  s.add(fake("7", 0, 2));
  const auto snap = s.snapshot();
  CHECK(snap.entries[snap.cursor_index].candidate.id == "5");
  CHECK(ids(s) == std::vector<std::string>{"6", "7", "5"});
}

TEST_CASE("ranking: degenerate last, equal keys keep arrival order") {
  TaskSession s("t", harness_context(), harness_cursor());
  s.add(fake("1", 0, 0, true));
  s.add(fake("2", 4, 1));
  s.add(fake("3", 0, 2));
  auto dup = fake("3", 0, 2);
  dup.id = "3b";
  s.add(dup);
  CHECK(ids(s) == std::vector<std::string>{"3", "3b", "2", "1"});
  const auto snap = s.snapshot();
  CHECK(snap.entries[0].arrival == 3);
  CHECK(snap.entries[1].arrival == 4);
}

TEST_CASE("candidates stream through the callback in retrieval order") {
  TaskSession s("reverse a string", harness_context(), harness_cursor());
  std::vector<int> ranks;
  std::vector<std::size_t> sizes;
  process_task(s, mini_index(), [&](const repair::Candidate& c) {
    ranks.push_back(c.retrieval_rank);
    sizes.push_back(s.size());
    CHECK(s.status() == SessionStatus::running);
  });
  REQUIRE(!ranks.empty());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    CHECK(ranks[i] == static_cast<int>(i));
    CHECK(sizes[i] == i);
  }
  const auto j = to_json(s, 2);
  CHECK(j["new_ids"].size() == ranks.size() - 2);
  CHECK(j["candidates"].size() == ranks.size());
}

TEST_CASE("max_candidates caps processing") {
  SessionOptions opts;
  opts.max_candidates = 2;
  const auto s = run("convert string to int", opts);
  CHECK(s->size() == 2);
  CHECK(s->snapshot().retrieved == 2);
}

TEST_CASE("the context changes what compiles") {
  const std::string ctx =
      "public class Main {\n    public static void main(String[] args) {\n        String s = \"12\";\n\n    }\n}\n";
  TaskSession with_s("t", frontend::SourceUnit(ctx), {5, 5});
  TaskSession harness("t", harness_context(), harness_cursor());
  auto c = repair::Candidate::from_snippet(corpus::RawSnippet{1, 1, 0, "int n = Integer.parseInt(s) + 1;", 0}, 0);
  auto a = c, b = c;
  with_s.evaluator().refresh(a);
  harness.evaluator().refresh(b);
  CHECK(a.error_count == 0);
  CHECK(b.error_count == 1);
}

TEST_CASE("processing a task does no file I/O") {
  const auto& idx = mini_index();
  const int before = g_opens;
  g_audit = true;
  for (const auto* task : {"convert string to int", "read file line by line", "calculate factorial"}) {
    TaskSession s(task, harness_context(), harness_cursor());
    process_task(s, idx);
    (void)to_json(s);
  }
  g_audit = false;
  CHECK(g_opens == before);

  // The interposer itself is live.
  g_audit = true;
  if (auto* f = std::fopen(SNIPFIT_TEST_DATA_DIR "/minicorpus/tasks.jsonl", "r")) std::fclose(f);
  g_audit = false;
  CHECK(g_opens == before + 1);
}
