#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snipfit/repair/candidate.hpp"
#include "snipfit/repair/evaluator.hpp"

namespace snipfit::repair {

enum class DeletionOrder { bottom_up, top_down };
enum class DeletionLoops { single, multi };
enum class Acceptance { strict, non_strict };

struct DeletionConfig {
  DeletionOrder order = DeletionOrder::bottom_up;
  DeletionLoops loops = DeletionLoops::multi;
  Acceptance acceptance = Acceptance::non_strict;

  friend bool operator==(const DeletionConfig&, const DeletionConfig&) = default;
};

/// All eight configurations, default first.
std::vector<DeletionConfig> all_deletion_configs();
/// e.g. "bottom_up/multi/non_strict".
std::string to_string(const DeletionConfig& cfg);
std::optional<DeletionOrder> order_from_name(std::string_view s);
std::optional<DeletionLoops> loops_from_name(std::string_view s);
std::optional<Acceptance> acceptance_from_name(std::string_view s);

/// Line-deletion local search over the physical body lines. Each pass walks
/// the remaining lines in `cfg.order`, trial-deletes one line, and keeps the
/// deletion when the error count does not exceed (non_strict) or is below
/// (strict) the best so far. Multi-loop repeats passes until one keeps
/// nothing. The search stops as soon as the best reaches zero errors.
/// A candidate without errors is returned unchanged.
Candidate delete_lines(Candidate c, const Evaluator& eval, const DeletionConfig& cfg = {});

struct OracleResult {
  int minimum = 0;               // over all line subsets, including the empty body
  int minimum_nonempty = 0;      // over subsets keeping at least one non-blank line
  std::uint64_t subsets = 0;
};

/// Exhaustive search over every subset of body lines to keep.
/// Throws Error(invalid_argument) when the body has more than `max_lines` lines.
OracleResult exhaustive_minimum(const Candidate& c, const Evaluator& eval, int max_lines = 10);

/// Lines of the body split on '\n' (a trailing newline ends the last line).
std::vector<std::string> body_lines(std::string_view body);

}  // namespace snipfit::repair
