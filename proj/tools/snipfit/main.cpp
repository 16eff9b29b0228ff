// snipfit command line: index a corpus, run a task, run the bench, serve the API.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snipfit/bench/bench.hpp"
#include "snipfit/corpus/index.hpp"
#include "snipfit/error.hpp"
#include "snipfit/interface/config.hpp"
#include "snipfit/interface/service.hpp"
#include "snipfit/testkit/testkit.hpp"

namespace fs = std::filesystem;
using namespace snipfit;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kNoResults = 3, kGoldenMismatch = 4 };

struct Flags {
  std::string mode = "lemma";
  bool omit_stop = true;
  std::string order = "bottom_up";
  std::string loops = "multi";
  std::string accept = "non_strict";
  long long timeout_ms = 2000;
};

void add_keyword_flags(CLI::App* app, Flags& f) {
  app->add_option("--mode", f.mode, "Keyword processing: none, stem or lemma")
      ->check(CLI::IsMember({"none", "stem", "lemma"}))
      ->capture_default_str();
  app->add_option("--omit-stop", f.omit_stop, "Drop stop words and \"java\" from titles and tasks")
      ->capture_default_str();
}

void add_pipeline_flags(CLI::App* app, interface::Config& c, Flags& f) {
  app->add_option("--corpus", c.corpus_path, "Corpus (JSON lines)");
  app->add_option("--index", c.index_path, "Index built by `snipfit index`");
  add_keyword_flags(app, f);
  app->add_option("--deletion-order", f.order, "bottom_up or top_down")
      ->check(CLI::IsMember({"bottom_up", "top_down"}))
      ->capture_default_str();
  app->add_option("--deletion-loops", f.loops, "single or multi")
      ->check(CLI::IsMember({"single", "multi"}))
      ->capture_default_str();
  app->add_option("--deletion-accept", f.accept, "strict or non_strict")
      ->check(CLI::IsMember({"strict", "non_strict"}))
      ->capture_default_str();
  app->add_option("--timeout-ms", f.timeout_ms, "Wall-clock budget per test run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void apply(const Flags& f, interface::Config& c) {
  c.keywords = {corpus::parse_keyword_mode(f.mode), f.omit_stop};
  c.deletion = {*repair::order_from_name(f.order), *repair::loops_from_name(f.loops),
                *repair::acceptance_from_name(f.accept)};
  c.timeout = std::chrono::milliseconds(f.timeout_ms);
  c.validate();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
  out << text;
}

std::string patch_summary(const repair::Candidate& c) {
  std::string s;
  for (const auto& p : c.patches) {
    if (!s.empty()) s += ",";
    s += repair::to_string(p.kind);
  }
  return s.empty() ? "-" : s;
}

int cmd_index(const fs::path& corpus_path, const fs::path& out, const Flags& f) {
  const auto docs = corpus::load_corpus(corpus_path);
  if (docs.empty()) std::cerr << "warning: " << corpus_path.string() << " holds no documents\n";
  const auto index = corpus::build_index(docs, {corpus::parse_keyword_mode(f.mode), f.omit_stop});
  index.save(out);
  std::size_t questions = 0;
  for (const auto& [id, d] : index.docs()) questions += d.kind == corpus::DocKind::question;
  std::cout << "indexed " << index.docs().size() << " documents (" << questions << " questions), "
            << index.postings().size() << " keywords, " << index.posting_count() << " postings -> " << out.string()
            << "\n";
  return kOk;
}

struct TaskArgs {
  std::string task;
  fs::path file;
  std::string at;
  bool json = false;
  int cycle = 0;
  std::string signature;
  fs::path test;
};

int cmd_task(const interface::Config& config, const TaskArgs& a) {
  const auto index = interface::load_index(config);
  std::string text;
  std::optional<pipeline::Cursor> cursor;
  if (!a.file.empty()) {
    text = read_file(a.file);
    if (a.at.empty()) throw Error(ErrorKind::invalid_argument, "--at LINE:COL is required with --file");
  }
  if (!a.at.empty()) cursor = interface::parse_cursor(a.at);
  const auto session = interface::make_session(config, a.task, text, cursor);
  pipeline::process_task(*session, index);

  nlohmann::json tests;
  if (!a.signature.empty()) {
    const auto sig = testkit::parse_signature(a.signature);
    const auto test = a.test.empty() ? testkit::generate_test_skeleton(sig) : testkit::TestCase{read_file(a.test), true};
    testkit::TestOptions opts;
    opts.budget = config.budget();
    tests = nlohmann::json::array();
    for (const auto& [id, r] : testkit::test_candidates(*session, test, sig, opts)) {
      tests.push_back({{"id", id}, {"status", r.status}, {"detail", r.detail}});
    }
  }
  for (int i = 0; i < a.cycle && session->size() > 0; ++i) session->cycle(+1);

  const auto status = session->status();
  if (a.json) {
    auto j = pipeline::to_json(*session);
    if (!tests.is_null()) j["tests"] = tests;
    std::cout << j.dump(2) << "\n";
  } else if (session->size() == 0) {
    std::cout << "no snippets found for '" << a.task << "' (" << pipeline::to_string(status) << ")\n";
  } else {
    const auto snap = session->snapshot();
    const auto& shown = snap.entries[snap.cursor_index].candidate;
    std::cout << "== candidate " << snap.cursor_index + 1 << "/" << snap.entries.size() << " (" << shown.id << ", "
              << shown.error_count << " errors)\n"
              << session->preview() << "\n== ranking\n";
    for (std::size_t i = 0; i < snap.entries.size(); ++i) {
      const auto& e = snap.entries[i];
      const auto& c = e.candidate;
      std::cout << (i == snap.cursor_index ? "> " : "  ") << i + 1 << ". " << c.id << "  errors=" << c.error_count
                << (c.degenerate ? " (empty)" : "") << "  stage=" << repair::to_string(c.stage)
                << "  patches=" << patch_summary(c);
      if (e.test) std::cout << "  test=" << e.test->status;
      std::cout << "\n";
    }
  }
  return status == pipeline::SessionStatus::complete ? kOk : kNoResults;
}

struct BenchArgs {
  fs::path corpus;
  fs::path tasks;
  fs::path out;
  fs::path golden;
};

int cmd_bench(const BenchArgs& a, const interface::Config& config) {
  bench::BenchOptions opts;
  opts.keywords = config.keywords;
  opts.cascade.deletion = config.deletion;
  opts.budget.wall = config.timeout;
  const auto report = bench::run_eval(corpus::load_corpus(a.corpus), bench::load_tasks(a.tasks), opts);
  const auto j = bench::to_json(report);
  fs::create_directories(a.out);
  write_file(a.out / "report.json", j.dump(2) + "\n");
  const auto text = bench::to_text(report);
  write_file(a.out / "report.txt", text);
  std::cout << text;
  if (a.golden.empty()) return kOk;
  const auto expected = nlohmann::json::parse(read_file(a.golden));
  const auto diff = bench::json_diff(expected, j);
  if (diff.empty()) {
    std::cout << "golden: match (" << a.golden.string() << ")\n";
    return kOk;
  }
  std::cout << "golden: " << diff.size() << " difference(s) against " << a.golden.string() << "\n";
  for (const auto& p : diff) std::cout << "  " << p << "\n";
  return kGoldenMismatch;
}

int cmd_serve(const interface::Config& config) {
  interface::Service service(config, interface::load_index(config));
  const int port = service.start();
  std::cout << "snipfit listening on http://" << config.host << ":" << port << "\n" << std::flush;
  service.wait();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snipfit: retrieve, repair, rank and test code snippets for a task"};
  app.require_subcommand(1);

  interface::Config config;
  Flags flags;

  auto* index = app.add_subcommand("index", "Build a keyword index from a corpus");
  fs::path index_corpus, index_out;
  index->add_option("--corpus", index_corpus, "Corpus (JSON lines)")->required();
  index->add_option("--out,--index", index_out, "Index file to write")->required();
  add_keyword_flags(index, flags);

  auto* task = app.add_subcommand("task", "Retrieve and repair snippets for a task");
  TaskArgs targs;
  task->add_option("task", targs.task, "Task text; a trailing '?' is ignored")->required();
  task->add_option("--file", targs.file, "User file to splice into (default: empty class + main)");
  task->add_option("--at", targs.at, "Insertion point LINE:COL in --file");
  task->add_flag("--json", targs.json, "Print the session as JSON");
  task->add_option("--cycle", targs.cycle, "Present the candidate this many places after the best")
      ->check(CLI::NonNegativeNumber);
  task->add_option("--signature", targs.signature, "Test the candidates with this signature, e.g. \"(String)->int\"");
  task->add_option("--test", targs.test, "Test method source (default: generated skeleton)");
  add_pipeline_flags(task, config, flags);

  auto* bench_cmd = app.add_subcommand("bench", "Run the evaluation over a corpus and task list");
  BenchArgs bargs;
  bench_cmd->add_option("--corpus", bargs.corpus, "Corpus (JSON lines)")->required();
  bench_cmd->add_option("--tasks", bargs.tasks, "Tasks (JSON lines)")->required();
  bench_cmd->add_option("--out", bargs.out, "Output directory")->required();
  bench_cmd->add_option("--golden", bargs.golden, "Expected report.json; exit 4 on any difference");
  add_keyword_flags(bench_cmd, flags);
  bench_cmd->add_option("--deletion-order", flags.order)->check(CLI::IsMember({"bottom_up", "top_down"}));
  bench_cmd->add_option("--deletion-loops", flags.loops)->check(CLI::IsMember({"single", "multi"}));
  bench_cmd->add_option("--deletion-accept", flags.accept)->check(CLI::IsMember({"strict", "non_strict"}));
  bench_cmd->add_option("--timeout-ms", flags.timeout_ms)->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API on the loopback interface");
  add_pipeline_flags(serve, config, flags);
  serve->add_option("--port", config.port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", config.host, "Bind address")->capture_default_str();
  serve->add_option("--static-dir", config.static_dir, "Directory served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply(flags, config);
    if (*index) return cmd_index(index_corpus, index_out, flags);
    if (*task) return cmd_task(config, targs);
    if (*bench_cmd) return cmd_bench(bargs, config);
    if (*serve) return cmd_serve(config);
  } catch (const Error& e) {
    std::cerr << "snipfit: " << e.what() << "\n";
    return e.kind() == ErrorKind::invalid_argument ? kUsage : kFailure;
  } catch (const std::exception& e) {
    std::cerr << "snipfit: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
