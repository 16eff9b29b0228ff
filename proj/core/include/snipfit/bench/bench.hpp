#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "snipfit/corpus/document.hpp"
#include "snipfit/corpus/keywords.hpp"
#include "snipfit/frontend/diagnostics.hpp"
#include "snipfit/repair/cascade.hpp"
#include "snipfit/runtime/sandbox.hpp"
#include "snipfit/testkit/testkit.hpp"

namespace snipfit::bench {

/// One evaluation task; signature and test are both present or both absent.
struct BenchTask {
  std::string task;
  std::optional<testkit::TypeSignature> signature;
  std::optional<std::string> test;
};

/// JSON lines: {"task": ..., "signature": "(String)->int", "test": "..."}.
/// Throws Error(format) naming the 1-based line.
std::vector<BenchTask> read_tasks(std::istream& in);
std::vector<BenchTask> load_tasks(const std::filesystem::path& path);

/// Snippets compiling (0 errors, at least one non-blank line) after each stage.
struct StageCounts {
  std::size_t retrieved = 0;
  std::size_t initial_compilable = 0;
  std::size_t after_integration = 0;
  std::size_t after_fixes = 0;
  std::size_t after_deletion = 0;
  std::size_t type_suggestible = 0;
  std::optional<std::size_t> passing;  // tasks with a test only
  std::optional<std::string> suggestion;  // most frequent type suggestion
};

struct DeletionRow {
  repair::DeletionConfig config;
  std::size_t compilable = 0;   // non-empty, 0-error results over all retrieved snippets
  std::size_t degenerate = 0;   // emptied by deletion
};

/// Per-config comparison against the exhaustive minimum, over every corpus
/// snippet that still has errors after fixes and has at most 10 lines.
struct OracleRow {
  repair::DeletionConfig config;
  std::size_t attained = 0;     // result error count == minimum
  std::size_t below = 0;        // result < minimum: must stay 0
  long long total_gap = 0;
  int max_gap = 0;
};

struct OracleSummary {
  std::size_t fixtures = 0;
  std::size_t skipped_long = 0;
  std::vector<OracleRow> rows;
};

struct EvalReport {
  corpus::KeywordOptions keywords;
  std::string deletion;  // configuration used by the main pipeline
  /// retrieval[omit_stop][mode]: total snippets retrieved over all tasks.
  std::array<std::array<std::size_t, 3>, 2> retrieval{};
  std::vector<std::pair<std::string, StageCounts>> tasks;  // input order
  std::map<frontend::DiagCode, std::size_t> histogram;     // initial diagnostics
  std::vector<DeletionRow> deletion_variants;              // all eight, default first
  OracleSummary oracle;
  std::size_t monotonicity_violations = 0;
  StageCounts totals;
  std::size_t tasks_with_compilable = 0;
  std::size_t tasks_with_suggestion = 0;
  std::size_t tasks_with_passing = 0;
};

struct BenchOptions {
  corpus::KeywordOptions keywords;
  repair::CascadeOptions cascade;
  runtime::Budget budget = [] {
    runtime::Budget b;
    b.max_steps = 2'000'000;
    return b;
  }();
  int oracle_max_lines = 10;
};

/// Runs every task through the pipeline in the empty class + main harness and
/// collects the report. Deterministic for fixed inputs.
EvalReport run_eval(const std::vector<corpus::CorpusDoc>& corpus, const std::vector<BenchTask>& tasks,
                    const BenchOptions& opts = {});

/// Counts initial diagnostics by code.
std::map<frontend::DiagCode, std::size_t> error_histogram(const std::vector<repair::Candidate>& candidates);

/// Sorted keys, no timings: byte-identical across runs.
nlohmann::json to_json(const EvalReport& r);
/// Aligned plain-text tables.
std::string to_text(const EvalReport& r);

/// JSON-pointer paths whose values differ (empty when equal).
std::vector<std::string> json_diff(const nlohmann::json& expected, const nlohmann::json& actual);

}  // namespace snipfit::bench
