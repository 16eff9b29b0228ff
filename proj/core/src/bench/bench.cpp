#include "snipfit/bench/bench.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snipfit/corpus/index.hpp"
#include "snipfit/error.hpp"
#include "snipfit/pipeline/session.hpp"
#include "snipfit/repair/deletion.hpp"
#include "snipfit/repair/fixes.hpp"

namespace snipfit::bench {
namespace {

using nlohmann::json;

constexpr std::array<corpus::KeywordMode, 3> kModes{corpus::KeywordMode::none, corpus::KeywordMode::stem,
                                                   corpus::KeywordMode::lemma};

std::vector<corpus::RawSnippet> retrieve(const corpus::InvertedIndex& index, const std::string& task) {
  try {
    return index.query(pipeline::normalize_task(task));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::empty_query) throw;
    return {};
  }
}

bool compiles(int errors, const std::string& body) { return errors == 0 && !repair::is_blank_body(body); }

json counts_json(const StageCounts& s) {
  json j{{"retrieved", s.retrieved},
         {"initial_compilable", s.initial_compilable},
         {"after_integration", s.after_integration},
         {"after_fixes", s.after_fixes},
         {"after_deletion", s.after_deletion},
         {"type_suggestible", s.type_suggestible}};
  j["passing"] = s.passing ? json(*s.passing) : json(nullptr);
  j["suggestion"] = s.suggestion ? json(*s.suggestion) : json(nullptr);
  return j;
}

void add_counts(StageCounts& into, const StageCounts& s) {
  into.retrieved += s.retrieved;
  into.initial_compilable += s.initial_compilable;
  into.after_integration += s.after_integration;
  into.after_fixes += s.after_fixes;
  into.after_deletion += s.after_deletion;
  into.type_suggestible += s.type_suggestible;
  if (s.passing) into.passing = into.passing.value_or(0) + *s.passing;
}

/// Candidate after integration and fixes: the state deletion starts from.
repair::Candidate before_deletion(const corpus::RawSnippet& s, const repair::Evaluator& eval,
                                  const repair::CascadeOptions& cascade) {
  auto opts = cascade;
  opts.delete_lines = false;
  return repair::run_cascade(repair::Candidate::from_snippet(s, 0), eval, opts);
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string rpad(const std::string& s, std::size_t w) { return s.size() < w ? std::string(w - s.size(), ' ') + s : s; }

void diff_into(const json& a, const json& b, const std::string& path, std::vector<std::string>& out) {
  if (a.is_number() && b.is_number()) {  // parsed files hold unsigned, reports signed
    if (a != b) out.push_back(path.empty() ? "/" : path);
    return;
  }
  if (a.type() != b.type()) {
    out.push_back(path.empty() ? "/" : path);
    return;
  }
  if (a.is_object()) {
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k)) {
        out.push_back(path + "/" + k);
      } else {
        diff_into(v, b.at(k), path + "/" + k, out);
      }
    }
    for (const auto& [k, v] : b.items()) {
      if (!a.contains(k)) out.push_back(path + "/" + k);
    }
  } else if (a.is_array()) {
    const auto n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= a.size() || i >= b.size()) {
        out.push_back(path + "/" + std::to_string(i));
      } else {
        diff_into(a[i], b[i], path + "/" + std::to_string(i), out);
      }
    }
  } else if (a != b) {
    out.push_back(path.empty() ? "/" : path);
  }
}

}  // namespace

std::vector<BenchTask> read_tasks(std::istream& in) {
  std::vector<BenchTask> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "tasks line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::format, where + e.what());
    }
    if (!j.is_object() || !j.contains("task") || !j.at("task").is_string()) {
      throw Error(ErrorKind::format, where + "expected an object with a string \"task\"");
    }
    BenchTask t;
    t.task = j.at("task").get<std::string>();
    const bool has_sig = j.contains("signature") && !j.at("signature").is_null();
    const bool has_test = j.contains("test") && !j.at("test").is_null();
    if (has_sig != has_test) throw Error(ErrorKind::format, where + "\"signature\" and \"test\" go together");
    if (has_sig) {
      try {
        t.signature = testkit::signature_from_json(j.at("signature"));
      } catch (const Error& e) {
        throw Error(ErrorKind::format, where + e.what());
      }
      if (!j.at("test").is_string()) throw Error(ErrorKind::format, where + "\"test\" must be a string");
      t.test = j.at("test").get<std::string>();
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<BenchTask> load_tasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read tasks file " + path.string());
  return read_tasks(in);
}

std::map<frontend::DiagCode, std::size_t> error_histogram(const std::vector<repair::Candidate>& candidates) {
  const auto eval = repair::Evaluator::harness();
  std::map<frontend::DiagCode, std::size_t> h;
  for (const auto& c : candidates) {
    auto fresh = repair::Candidate::from_snippet(
        corpus::RawSnippet{c.source_answer, c.question_id, c.block_index, c.original, c.answer_score}, 0);
    eval.refresh(fresh);
    for (const auto& d : fresh.diagnostics) ++h[d.code];
  }
  return h;
}

EvalReport run_eval(const std::vector<corpus::CorpusDoc>& corpus, const std::vector<BenchTask>& tasks,
                    const BenchOptions& opts) {
  EvalReport r;
  r.keywords = opts.keywords;
  r.deletion = repair::to_string(opts.cascade.deletion);
  const auto eval = repair::Evaluator::harness();

  // Retrieval matrix.
  for (int omit = 0; omit < 2; ++omit) {
    for (std::size_t m = 0; m < kModes.size(); ++m) {
      const auto index = corpus::build_index(corpus, {kModes[m], omit == 1});
      for (const auto& t : tasks) r.retrieval[omit][m] += retrieve(index, t.task).size();
    }
  }

  const auto index = corpus::build_index(corpus, opts.keywords);
  const auto configs = repair::all_deletion_configs();
  for (const auto& cfg : configs) r.deletion_variants.push_back({cfg, 0, 0});

  for (const auto& t : tasks) {
    StageCounts s;
    pipeline::SessionOptions so;
    so.cascade = opts.cascade;
    pipeline::TaskSession session(t.task, frontend::SourceUnit(pipeline::harness_context()), pipeline::harness_cursor(),
                                  so);
    pipeline::process_task(session, index);
    const auto snap = session.snapshot();
    s.retrieved = snap.entries.size();

    std::vector<repair::Candidate> all;
    for (const auto& e : snap.entries) {
      const auto& c = e.candidate;
      all.push_back(c);
      for (int i = 1; i < repair::kStageCount; ++i) {
        if (c.stage_errors[i] > c.stage_errors[i - 1]) ++r.monotonicity_violations;
      }
      for (const auto& p : c.patches) {
        if (p.errors_after > p.errors_before) ++r.monotonicity_violations;
      }
      s.initial_compilable += c.stage_errors[0] == 0;
      s.after_integration += c.stage_errors[1] == 0;
      s.after_fixes += c.stage_errors[2] == 0;
      s.after_deletion += compiles(c.error_count, c.body);
      s.type_suggestible += testkit::suggest_types(c).has_value();
    }
    for (const auto& [code, n] : error_histogram(all)) r.histogram[code] += n;
    if (!(s.initial_compilable <= s.after_integration && s.after_integration <= s.after_fixes &&
          s.after_fixes <= s.after_deletion)) {
      ++r.monotonicity_violations;
    }
    if (const auto sugg = testkit::suggest_for_session(session, 1); !sugg.empty()) {
      s.suggestion = testkit::to_string(sugg.front());
    }

    // Deletion variants start from the same post-fix state.
    for (const auto& e : snap.entries) {
      const auto& c = e.candidate;
      const auto base = before_deletion(
          corpus::RawSnippet{c.source_answer, c.question_id, c.block_index, c.original, c.answer_score}, eval,
          opts.cascade);
      for (auto& row : r.deletion_variants) {
        const auto d = base.error_count > 0 ? repair::delete_lines(base, eval, row.config) : base;
        row.compilable += compiles(d.error_count, d.body);
        row.degenerate += repair::is_blank_body(d.body);
      }
    }

    if (t.signature && t.test) {
      testkit::TestOptions topts;
      topts.budget = opts.budget;
      const auto results = testkit::test_candidates(session, testkit::TestCase{*t.test, true}, *t.signature, topts);
      s.passing = static_cast<std::size_t>(
          std::count_if(results.begin(), results.end(), [](const auto& p) { return p.second.status == "passed"; }));
      r.tasks_with_passing += *s.passing > 0;
    }
    r.tasks_with_compilable += s.after_deletion > 0;
    r.tasks_with_suggestion += s.type_suggestible > 0;
    add_counts(r.totals, s);
    r.tasks.emplace_back(t.task, std::move(s));
  }

  // Oracle over every snippet of the corpus.
  for (const auto& cfg : configs) r.oracle.rows.push_back({cfg, 0, 0, 0, 0});
  for (const auto& doc : corpus) {
    for (const auto& snip : corpus::extract_snippets(doc)) {
      const auto base = before_deletion(snip, eval, opts.cascade);
      if (base.error_count == 0) continue;
      if (static_cast<int>(repair::body_lines(base.body).size()) > opts.oracle_max_lines) {
        ++r.oracle.skipped_long;
        continue;
      }
      const auto oracle = repair::exhaustive_minimum(base, eval, opts.oracle_max_lines);
      ++r.oracle.fixtures;
      for (auto& row : r.oracle.rows) {
        const auto d = repair::delete_lines(base, eval, row.config);
        const int gap = d.error_count - oracle.minimum;
        row.attained += gap == 0;
        row.below += gap < 0;
        row.total_gap += gap;
        row.max_gap = std::max(row.max_gap, gap);
      }
    }
  }
  return r;
}

json to_json(const EvalReport& r) {
  json j;
  j["keywords"] = {{"mode", corpus::to_string(r.keywords.mode)}, {"omit_stop", r.keywords.omit_stop}};
  j["deletion"] = r.deletion;
  json matrix = json::object();
  for (int omit = 0; omit < 2; ++omit) {
    json row = json::object();
    for (std::size_t m = 0; m < kModes.size(); ++m) row[std::string(corpus::to_string(kModes[m]))] = r.retrieval[omit][m];
    matrix[omit ? "omit_stop" : "keep_stop"] = row;
  }
  j["retrieval"] = matrix;
  json tasks = json::array();
  for (const auto& [task, s] : r.tasks) {
    auto t = counts_json(s);
    t["task"] = task;
    tasks.push_back(t);
  }
  j["tasks"] = tasks;
  // Most frequent first, ties by code id.
  std::vector<std::pair<frontend::DiagCode, std::size_t>> hist(r.histogram.begin(), r.histogram.end());
  std::stable_sort(hist.begin(), hist.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  json h = json::array();
  for (const auto& [code, n] : hist) h.push_back({{"code", frontend::code_name(code)}, {"count", n}});
  j["error_histogram"] = h;
  json del = json::array();
  for (const auto& row : r.deletion_variants) {
    del.push_back({{"config", repair::to_string(row.config)}, {"compilable", row.compilable}, {"degenerate", row.degenerate}});
  }
  j["deletion_variants"] = del;
  json orows = json::array();
  for (const auto& row : r.oracle.rows) {
    orows.push_back({{"config", repair::to_string(row.config)},
                     {"attained", row.attained},
                     {"below_minimum", row.below},
                     {"total_gap", row.total_gap},
                     {"max_gap", row.max_gap}});
  }
  j["oracle"] = {{"fixtures", r.oracle.fixtures}, {"skipped_long", r.oracle.skipped_long}, {"configs", orows}};
  j["monotonicity_violations"] = r.monotonicity_violations;
  auto totals = counts_json(r.totals);
  totals.erase("suggestion");
  totals["tasks"] = r.tasks.size();
  totals["tasks_with_compilable"] = r.tasks_with_compilable;
  totals["tasks_with_suggestion"] = r.tasks_with_suggestion;
  totals["tasks_with_passing"] = r.tasks_with_passing;
  j["totals"] = totals;
  j["reference"] = {{"retrieved", 6954},         {"initial_compilable", 327}, {"after_integration", 470},
                    {"after_fixes", 968},        {"after_deletion", 2037},    {"type_suggestible", 316},
                    {"note", "full-dump scale figures, for comparison only"}};
  return j;
}

std::string to_text(const EvalReport& r) {
  std::ostringstream out;
  out << "Retrieved snippets (" << r.tasks.size() << " tasks)\n";
  out << pad("", 12) << rpad("none", 8) << rpad("stem", 8) << rpad("lemma", 8) << "\n";
  for (int omit = 0; omit < 2; ++omit) {
    out << pad(omit ? "omit stop" : "keep stop", 12);
    for (std::size_t m = 0; m < kModes.size(); ++m) out << rpad(std::to_string(r.retrieval[omit][m]), 8);
    out << "\n";
  }
  out << "\nPer-task compilable snippets (" << corpus::to_string(r.keywords.mode)
      << (r.keywords.omit_stop ? ", omit stop" : ", keep stop") << "; deletion " << r.deletion << ")\n";
  std::size_t w = 6;
  for (const auto& [task, s] : r.tasks) w = std::max(w, task.size());
  const std::vector<std::string> heads{"retr", "init", "integ", "fixes", "delete", "types", "pass"};
  out << pad("task", w + 2);
  for (const auto& h : heads) out << rpad(h, 8);
  out << "  suggestion\n";
  auto row = [&](const std::string& name, const StageCounts& s) {
    out << pad(name, w + 2);
    for (auto v : {s.retrieved, s.initial_compilable, s.after_integration, s.after_fixes, s.after_deletion,
                   s.type_suggestible}) {
      out << rpad(std::to_string(v), 8);
    }
    out << rpad(s.passing ? std::to_string(*s.passing) : "-", 8);
    out << "  " << s.suggestion.value_or("-") << "\n";
  };
  for (const auto& [task, s] : r.tasks) row(task, s);
  row("total", r.totals);
  out << "\ntasks with compilable snippets: " << r.tasks_with_compilable << "/" << r.tasks.size()
      << "; with type suggestions: " << r.tasks_with_suggestion << "; with passing snippets: " << r.tasks_with_passing
      << "\n";

  out << "\nInitial diagnostics\n";
  std::vector<std::pair<frontend::DiagCode, std::size_t>> hist(r.histogram.begin(), r.histogram.end());
  std::stable_sort(hist.begin(), hist.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [code, n] : hist) out << pad(std::string(frontend::code_name(code)), 22) << rpad(std::to_string(n), 6) << "\n";

  out << "\nDeletion variants" << pad("", 16) << rpad("compilable", 12) << rpad("emptied", 9) << "\n";
  for (const auto& d : r.deletion_variants) {
    out << pad(repair::to_string(d.config), 33) << rpad(std::to_string(d.compilable), 12)
        << rpad(std::to_string(d.degenerate), 9) << "\n";
  }
  out << "\nExhaustive minimum (" << r.oracle.fixtures << " snippets, " << r.oracle.skipped_long << " too long)\n";
  out << pad("config", 33) << rpad("attained", 10) << rpad("below", 7) << rpad("gap", 6) << rpad("max", 6) << "\n";
  for (const auto& o : r.oracle.rows) {
    out << pad(repair::to_string(o.config), 33) << rpad(std::to_string(o.attained), 10)
        << rpad(std::to_string(o.below), 7) << rpad(std::to_string(o.total_gap), 6) << rpad(std::to_string(o.max_gap), 6)
        << "\n";
  }
  out << "\nmonotonicity violations: " << r.monotonicity_violations << "\n";
  return out.str();
}

std::vector<std::string> json_diff(const json& expected, const json& actual) {
  std::vector<std::string> out;
  diff_into(expected, actual, "", out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace snipfit::bench
