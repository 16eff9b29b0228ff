#include "snipfit/repair/deletion.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "snipfit/error.hpp"

namespace snipfit::repair {
namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

/// Body split into segments that concatenate back to the body exactly.
std::vector<std::string> segments(std::string_view body) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto nl = body.find('\n', pos);
    const auto end = nl == std::string_view::npos ? body.size() : nl + 1;
    out.emplace_back(body.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

std::string compose(const std::vector<std::string>& segs, const std::vector<bool>& keep) {
  std::string out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (keep[i]) out += segs[i];
  }
  return out;
}

}  // namespace

std::vector<DeletionConfig> all_deletion_configs() {
  std::vector<DeletionConfig> out;
  for (auto order : {DeletionOrder::bottom_up, DeletionOrder::top_down}) {
    for (auto loops : {DeletionLoops::multi, DeletionLoops::single}) {
      for (auto acc : {Acceptance::non_strict, Acceptance::strict}) out.push_back({order, loops, acc});
    }
  }
  return out;
}

std::string to_string(const DeletionConfig& cfg) {
  std::string s = cfg.order == DeletionOrder::bottom_up ? "bottom_up" : "top_down";
  s += cfg.loops == DeletionLoops::multi ? "/multi" : "/single";
  s += cfg.acceptance == Acceptance::strict ? "/strict" : "/non_strict";
  return s;
}

std::optional<DeletionOrder> order_from_name(std::string_view s) {
  if (s == "bottom_up") return DeletionOrder::bottom_up;
  if (s == "top_down") return DeletionOrder::top_down;
  return std::nullopt;
}

std::optional<DeletionLoops> loops_from_name(std::string_view s) {
  if (s == "single") return DeletionLoops::single;
  if (s == "multi") return DeletionLoops::multi;
  return std::nullopt;
}

std::optional<Acceptance> acceptance_from_name(std::string_view s) {
  if (s == "strict") return Acceptance::strict;
  if (s == "non_strict") return Acceptance::non_strict;
  return std::nullopt;
}

std::vector<std::string> body_lines(std::string_view body) {
  std::vector<std::string> out;
  for (auto& seg : segments(body)) {
    if (!seg.empty() && seg.back() == '\n') seg.pop_back();
    out.push_back(std::move(seg));
  }
  return out;
}

Candidate delete_lines(Candidate c, const Evaluator& eval, const DeletionConfig& cfg) {
  if (c.error_count == 0) return c;
  const auto segs = segments(c.body);
  const auto n = segs.size();
  std::vector<bool> keep(n, true);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.order == DeletionOrder::bottom_up) std::reverse(order.begin(), order.end());

  int best = c.error_count;
  bool done = false;
  while (!done && best > 0) {
    done = true;
    for (const auto i : order) {
      // Whitespace-only lines cannot change the error count.
      if (!keep[i] || blank(segs[i])) continue;
      keep[i] = false;
      auto body = compose(segs, keep);
      auto ev = eval.evaluate(c.imports, body);
      const bool accept = cfg.acceptance == Acceptance::strict ? ev.error_count < best : ev.error_count <= best;
      if (!accept) {
        keep[i] = true;
        continue;
      }
      std::size_t offset = 0;
      int line = 1;
      for (std::size_t j = 0; j < i; ++j) {
        if (keep[j]) {
          offset += segs[j].size();
          ++line;
        }
      }
      PatchRecord p;
      p.kind = PatchKind::delete_line;
      p.line = line;
      p.edits.push_back({offset, segs[i], ""});
      p.errors_before = best;
      p.errors_after = ev.error_count;
      c.patches.push_back(std::move(p));
      c.deleted_lines.push_back(static_cast<int>(i));
      c.body = std::move(body);
      c.diagnostics = std::move(ev.diagnostics);
      c.error_count = ev.error_count;
      best = ev.error_count;
      done = false;
      if (best == 0) break;
    }
    if (cfg.loops == DeletionLoops::single) break;
  }
  std::sort(c.deleted_lines.begin(), c.deleted_lines.end());
  c.degenerate = is_blank_body(c.body);
  return c;
}

OracleResult exhaustive_minimum(const Candidate& c, const Evaluator& eval, int max_lines) {
  const auto segs = segments(c.body);
  std::vector<std::size_t> movable;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!blank(segs[i])) movable.push_back(i);
  }
  if (static_cast<int>(movable.size()) > max_lines) {
    throw Error(ErrorKind::invalid_argument, "snippet has " + std::to_string(movable.size()) +
                                                 " lines; exhaustive search is limited to " +
                                                 std::to_string(max_lines));
  }
  OracleResult r;
  r.minimum = std::numeric_limits<int>::max();
  r.minimum_nonempty = std::numeric_limits<int>::max();
  const std::uint64_t total = std::uint64_t{1} << movable.size();
  std::vector<bool> keep(segs.size(), true);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t b = 0; b < movable.size(); ++b) keep[movable[b]] = ((mask >> b) & 1U) != 0;
    const int errors = eval.error_count(c.imports, compose(segs, keep));
    r.minimum = std::min(r.minimum, errors);
    if (mask != 0) r.minimum_nonempty = std::min(r.minimum_nonempty, errors);
    ++r.subsets;
  }
  if (movable.empty()) r.minimum_nonempty = r.minimum;
  return r;
}

}  // namespace snipfit::repair
