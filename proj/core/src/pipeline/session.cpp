#include "snipfit/pipeline/session.hpp"

#include <algorithm>
#include <tuple>

#include <nlohmann/json.hpp>

#include "snipfit/error.hpp"

namespace snipfit::pipeline {

std::string_view to_string(SessionStatus s) noexcept {
  switch (s) {
    case SessionStatus::pending: return "pending";
    case SessionStatus::running: return "running";
    case SessionStatus::complete: return "complete";
    case SessionStatus::no_results: return "no_results";
    case SessionStatus::empty_query: return "empty_query";
  }
  return "?";
}

bool rank_less(const Entry& a, const Entry& b) {
  const auto& x = a.candidate;
  const auto& y = b.candidate;
  return std::make_tuple(-a.passed_tests, x.degenerate, x.error_count, x.retrieval_rank, x.source_answer,
                         x.block_index) <
         std::make_tuple(-b.passed_tests, y.degenerate, y.error_count, y.retrieval_rank, y.source_answer,
                         y.block_index);
}

TaskSession::TaskSession(std::string task, frontend::SourceUnit context, Cursor cursor, SessionOptions options,
                         const frontend::TypeRegistry& registry)
    : task_(std::move(task)), evaluator_(std::move(context), cursor, registry), options_(options) {}

TaskSession::Snapshot TaskSession::snapshot() const {
  std::lock_guard lock(mu_);
  return Snapshot{status_, entries_, cursor_index_, retrieved_, tested_, version_};
}

SessionStatus TaskSession::status() const {
  std::lock_guard lock(mu_);
  return status_;
}

std::size_t TaskSession::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t TaskSession::cycle(int direction) {
  std::lock_guard lock(mu_);
  if (entries_.empty()) throw Error(ErrorKind::invalid_argument, "session has no candidates to cycle through");
  const auto n = static_cast<long long>(entries_.size());
  const long long next = ((static_cast<long long>(cursor_index_) + direction) % n + n) % n;
  cursor_index_ = static_cast<std::size_t>(next);
  cycled_ = true;
  ++version_;
  return cursor_index_;
}

std::string TaskSession::preview() const {
  std::lock_guard lock(mu_);
  if (entries_.empty()) return evaluator_.context().text();
  const auto& c = entries_[cursor_index_].candidate;
  return splice(evaluator_.context(), evaluator_.cursor(), c.imports, c.body).unit.text();
}

void TaskSession::begin(std::size_t retrieved) {
  std::lock_guard lock(mu_);
  status_ = SessionStatus::running;
  retrieved_ = retrieved;
  ++version_;
}

void TaskSession::finish(SessionStatus status) {
  std::lock_guard lock(mu_);
  status_ = status;
  ++version_;
}

void TaskSession::add(repair::Candidate c) {
  std::lock_guard lock(mu_);
  Entry e{std::move(c), 0, ++arrivals_, std::nullopt};
  // Insert after every entry that does not rank below it: equal keys keep arrival order.
  const auto pos = std::upper_bound(entries_.begin(), entries_.end(), e, rank_less);
  const auto at = static_cast<std::size_t>(pos - entries_.begin());
  entries_.insert(pos, std::move(e));
  // The best is presented until the user cycles; after that the presented
  // candidate stays put while others arrive around it.
  if (!cycled_) {
    cursor_index_ = 0;
  } else if (at <= cursor_index_) {
    ++cursor_index_;
  }
  ++version_;
}

void TaskSession::apply_tests(const std::vector<std::pair<std::string, TestRecord>>& results) {
  std::lock_guard lock(mu_);
  for (auto& e : entries_) {
    e.passed_tests = 0;
    e.test.reset();
  }
  for (const auto& [id, rec] : results) {
    for (auto& e : entries_) {
      if (e.candidate.id != id) continue;
      e.test = rec;
      e.passed_tests = rec.status == "passed" ? 1 : 0;
    }
  }
  sort_locked();
  tested_ = true;
  cursor_index_ = 0;
  cycled_ = false;
  ++version_;
}

void TaskSession::sort_locked() { std::stable_sort(entries_.begin(), entries_.end(), rank_less); }

std::string normalize_task(std::string_view task) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!task.empty() && is_space(task.front())) task.remove_prefix(1);
  while (!task.empty() && (is_space(task.back()) || task.back() == '?')) task.remove_suffix(1);
  return std::string(task);
}

void process_task(TaskSession& session, const corpus::InvertedIndex& index,
                  const std::function<void(const repair::Candidate&)>& on_candidate) {
  std::vector<corpus::RawSnippet> snippets;
  try {
    snippets = index.query(normalize_task(session.task()));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::empty_query) throw;
    session.finish(SessionStatus::empty_query);
    return;
  }
  const auto limit = session.options().max_candidates;
  if (limit > 0 && snippets.size() > limit) snippets.resize(limit);
  if (snippets.empty()) {
    session.finish(SessionStatus::no_results);
    return;
  }
  session.begin(snippets.size());
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    auto c = repair::Candidate::from_snippet(snippets[i], static_cast<int>(i));
    c = repair::run_cascade(std::move(c), session.evaluator(), session.options().cascade);
    if (on_candidate) on_candidate(c);
    session.add(std::move(c));
  }
  session.finish(SessionStatus::complete);
}

nlohmann::json to_json(const Entry& e, std::size_t rank) {
  auto j = repair::to_json(e.candidate);
  j["rank"] = rank;
  j["arrival"] = e.arrival;
  j["passed_tests"] = e.passed_tests;
  if (e.test) {
    j["test"] = {{"status", e.test->status},
                 {"detail", e.test->detail},
                 {"elapsed_ms", e.test->elapsed_ms},
                 {"function_source", e.test->function_source}};
  } else {
    j["test"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const TaskSession& s, std::uint64_t since) {
  const auto snap = s.snapshot();
  auto candidates = nlohmann::json::array();
  auto new_ids = nlohmann::json::array();
  for (std::size_t i = 0; i < snap.entries.size(); ++i) {
    candidates.push_back(to_json(snap.entries[i], i));
    if (snap.entries[i].arrival > since) new_ids.push_back(snap.entries[i].candidate.id);
  }
  nlohmann::json j{{"task", s.task()},
                   {"status", to_string(snap.status)},
                   {"retrieved", snap.retrieved},
                   {"processed", snap.entries.size()},
                   {"cursor_index", snap.cursor_index},
                   {"tested", snap.tested},
                   {"version", snap.version},
                   {"cursor", {{"line", s.cursor().line}, {"col", s.cursor().col}}},
                   {"candidates", std::move(candidates)},
                   {"new_ids", std::move(new_ids)}};
  if (snap.entries.empty()) {
    j["presented"] = nullptr;
    j["preview"] = s.context().text();
  } else {
    const auto& c = snap.entries[snap.cursor_index].candidate;
    j["presented"] = c.id;
    j["preview"] = splice(s.context(), s.cursor(), c.imports, c.body).unit.text();
  }
  return j;
}

}  // namespace snipfit::pipeline
