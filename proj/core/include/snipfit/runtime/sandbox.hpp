#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snipfit/frontend/registry.hpp"
#include "snipfit/frontend/source.hpp"
#include "snipfit/runtime/value.hpp"

namespace snipfit::runtime {

enum class RunStatus { passed, failed, runtime_error, timeout, compile_error };

std::string_view to_string(RunStatus s) noexcept;

/// Execution limits. Exhausting either the step or the wall-clock budget, or
/// raising `cancel`, ends the run with RunStatus::timeout.
struct Budget {
  std::uint64_t max_steps = 10'000'000;
  std::chrono::milliseconds wall{2000};
  const std::atomic<bool>* cancel = nullptr;
  std::size_t max_output = 64 * 1024;  // captured System.out bytes
};

struct RunOutcome {
  RunStatus status = RunStatus::runtime_error;
  std::string detail;  // failure message, exception, or first compile error
  double elapsed_ms = 0;
  std::uint64_t steps = 0;
  std::string output;  // captured System.out / System.err
  std::optional<Value> result;  // return value of invoke()
};

/// Maximum interpreted call depth before StackOverflowError.
inline constexpr int kMaxCallDepth = 400;

/// Source of the test harness class: hoisted imports, then a SnippetTest
/// class holding the function under test and the test method.
std::string test_program(std::string_view imports, std::string_view function_source, std::string_view test_source);

/// Compiles and runs the @Test method (or the first method whose name starts
/// with "test") of test_program(...). Passed when it returns normally,
/// failed on an assertion failure.
RunOutcome run_test(std::string_view imports, std::string_view function_source, std::string_view test_source,
                    const Budget& budget = {},
                    const frontend::TypeRegistry& registry = frontend::TypeRegistry::standard());

/// Runs `main` of the first class declaring it.
RunOutcome run_main(const frontend::SourceUnit& program, const Budget& budget = {},
                    const frontend::TypeRegistry& registry = frontend::TypeRegistry::standard());

/// Calls static method `method` of the first class declaring it with `args`;
/// the return value is stored in RunOutcome::result. Status is passed when
/// the call returns normally.
RunOutcome invoke(const frontend::SourceUnit& program, std::string_view method, std::vector<Value> args,
                  const Budget& budget = {},
                  const frontend::TypeRegistry& registry = frontend::TypeRegistry::standard());

}  // namespace snipfit::runtime
