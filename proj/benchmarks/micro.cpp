// Micro benchmarks for the hot paths: keyword processing, retrieval, the
// repair cascade, line deletion and sandboxed test runs.

#include <string>

#include <benchmark/benchmark.h>

#include "snipfit/corpus/index.hpp"
#include "snipfit/repair/cascade.hpp"
#include "snipfit/runtime/sandbox.hpp"

using namespace snipfit;

namespace {

const std::vector<corpus::CorpusDoc>& mini_corpus() {
  static const auto docs = corpus::load_corpus(std::string(SNIPFIT_DATA_DIR) + "/minicorpus/corpus.jsonl");
  return docs;
}

const std::string kSnippet =
    "import com.google.common.primitives.Ints;\n"
    "import java.util.Optional;\n"
    "\n"
    "int foo = 0;\n"
    "foo = Optional\n"
    "     .ofNullable(Ints.tryParse(myString))\n"
    "     .orElse(0);\n";

const std::string kBroken =
    "int[] nums = {4, 8, 2};\n"
    "int max = nums[0];\n"
    "for (int i = 1; i < nums.length; i++) {\n"
    "    max = Math.max(max, nums[i]);\n"
    "}\n"
    "Output: 8\n"
    "printAll(nums);\n";

void BM_ProcessKeywords(benchmark::State& state) {
  const auto mode = static_cast<corpus::KeywordMode>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(corpus::process_keywords("How do I convert strings to integers in Java?", mode, true));
  }
}
BENCHMARK(BM_ProcessKeywords)->Arg(0)->Arg(1)->Arg(2);

void BM_BuildIndex(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(corpus::build_index(mini_corpus(), {}));
}
BENCHMARK(BM_BuildIndex);

void BM_Query(benchmark::State& state) {
  const auto idx = corpus::build_index(mini_corpus(), {});
  for (auto _ : state) benchmark::DoNotOptimize(idx.query("convert string to int"));
}
BENCHMARK(BM_Query);

void BM_Compile(benchmark::State& state) {
  const auto eval = repair::Evaluator::harness();
  for (auto _ : state) benchmark::DoNotOptimize(eval.error_count({}, kSnippet));
}
BENCHMARK(BM_Compile);

void BM_Cascade(benchmark::State& state) {
  const auto eval = repair::Evaluator::harness();
  for (auto _ : state) {
    auto c = repair::Candidate::from_snippet(corpus::RawSnippet{1, 1, 0, kSnippet, 0}, 0);
    benchmark::DoNotOptimize(repair::run_cascade(std::move(c), eval));
  }
}
BENCHMARK(BM_Cascade);

void BM_DeleteLines(benchmark::State& state) {
  const auto eval = repair::Evaluator::harness();
  const auto configs = repair::all_deletion_configs();
  const auto& cfg = configs[static_cast<std::size_t>(state.range(0))];
  auto base = repair::Candidate::from_snippet(corpus::RawSnippet{1, 1, 0, kBroken, 0}, 0);
  eval.refresh(base);
  for (auto _ : state) benchmark::DoNotOptimize(repair::delete_lines(base, eval, cfg));
  state.SetLabel(repair::to_string(cfg));
}
BENCHMARK(BM_DeleteLines)->DenseRange(0, 7);

void BM_RunTest(benchmark::State& state) {
  const std::string fn =
      "public static int snippet(String s){\n    int n = Integer.parseInt(s);\n    return n;\n}\n";
  const std::string test = "@Test\npublic void testSnippet(){\n    assertEquals(snippet(\"42\"), 42);\n}";
  for (auto _ : state) benchmark::DoNotOptimize(runtime::run_test("", fn, test));
}
BENCHMARK(BM_RunTest);

}  // namespace

BENCHMARK_MAIN();
