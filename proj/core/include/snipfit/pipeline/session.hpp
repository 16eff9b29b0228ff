#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "snipfit/corpus/index.hpp"
#include "snipfit/frontend/registry.hpp"
#include "snipfit/frontend/source.hpp"
#include "snipfit/pipeline/splice.hpp"
#include "snipfit/repair/candidate.hpp"
#include "snipfit/repair/cascade.hpp"
#include "snipfit/repair/evaluator.hpp"

namespace snipfit::pipeline {

enum class SessionStatus {
  pending,      // created, not processed yet
  running,      // candidates still arriving
  complete,     // every retrieved snippet processed
  no_results,   // retrieval matched nothing
  empty_query,  // no keyword survived processing
};

std::string_view to_string(SessionStatus s) noexcept;

/// Result of testing one candidate.
struct TestRecord {
  std::string status;  // runtime status name, or "not_synthesized"
  std::string detail;
  double elapsed_ms = 0;
  std::string function_source;  // synthesized `snippet` function, when any
};

struct Entry {
  repair::Candidate candidate;
  int passed_tests = 0;
  std::uint64_t arrival = 0;  // 1-based processing order
  std::optional<TestRecord> test;
};

/// Ordering: passed tests desc, degenerate last, errors asc, retrieval rank
/// asc, then answer id and block index.
bool rank_less(const Entry& a, const Entry& b);

struct SessionOptions {
  repair::CascadeOptions cascade;
  std::size_t max_candidates = 0;  // 0 = no limit
};

/// A task with its processed candidates. The list is a live, always-sorted
/// view; all members are safe to call from several threads, with a single
/// writer at a time (process_task or a test run).
class TaskSession {
 public:
  TaskSession(std::string task, frontend::SourceUnit context, Cursor cursor, SessionOptions options = {},
              const frontend::TypeRegistry& registry = frontend::TypeRegistry::standard());

  TaskSession(const TaskSession&) = delete;
  TaskSession& operator=(const TaskSession&) = delete;

  [[nodiscard]] const std::string& task() const noexcept { return task_; }
  [[nodiscard]] const frontend::SourceUnit& context() const noexcept { return evaluator_.context(); }
  [[nodiscard]] Cursor cursor() const noexcept { return evaluator_.cursor(); }
  [[nodiscard]] const repair::Evaluator& evaluator() const noexcept { return evaluator_; }
  [[nodiscard]] const SessionOptions& options() const noexcept { return options_; }

  struct Snapshot {
    SessionStatus status = SessionStatus::pending;
    std::vector<Entry> entries;
    std::size_t cursor_index = 0;
    std::size_t retrieved = 0;
    bool tested = false;
    std::uint64_t version = 0;
  };
  [[nodiscard]] Snapshot snapshot() const;
  [[nodiscard]] SessionStatus status() const;
  [[nodiscard]] std::size_t size() const;

  /// Moves the presented candidate by `direction` (+1 / -1) with wraparound.
  /// Throws Error(invalid_argument) when there are no candidates.
  std::size_t cycle(int direction);
  /// Spliced file for the presented candidate (the context when empty).
  [[nodiscard]] std::string preview() const;

  // Writer interface.
  void begin(std::size_t retrieved);
  void finish(SessionStatus status);
  void add(repair::Candidate c);
  /// Stores test results keyed by candidate id, re-sorts, and presents the new best.
  void apply_tests(const std::vector<std::pair<std::string, TestRecord>>& results);

 private:
  void sort_locked();

  std::string task_;
  repair::Evaluator evaluator_;
  SessionOptions options_;
  mutable std::mutex mu_;
  SessionStatus status_ = SessionStatus::pending;
  std::vector<Entry> entries_;
  std::size_t cursor_index_ = 0;
  std::size_t retrieved_ = 0;
  bool tested_ = false;
  bool cycled_ = false;
  std::uint64_t version_ = 0;
  std::uint64_t arrivals_ = 0;
};

/// Strips whitespace and a trailing question mark from a typed task.
std::string normalize_task(std::string_view task);

/// Fig. 1 flow: retrieve, evaluate each snippet in context, run the cascade on
/// non-compiling ones, and add every candidate to the session as it finishes.
/// `on_candidate` is called after each addition. Performs no file I/O.
void process_task(TaskSession& session, const corpus::InvertedIndex& index,
                  const std::function<void(const repair::Candidate&)>& on_candidate = {});

nlohmann::json to_json(const Entry& e, std::size_t rank);
/// Session JSON shared by the CLI and the service. Entries with arrival
/// greater than `since` are listed under "new_ids".
nlohmann::json to_json(const TaskSession& s, std::uint64_t since = 0);

}  // namespace snipfit::pipeline
