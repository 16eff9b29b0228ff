#include "snipfit/repair/candidate.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "snipfit/error.hpp"
#include "snipfit/repair/evaluator.hpp"

namespace snipfit::repair {

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::retrieved: return "retrieved";
    case Stage::integrated: return "integrated";
    case Stage::fixed: return "fixed";
    case Stage::deleted: return "deleted";
  }
  return "?";
}

std::string_view to_string(PatchKind k) noexcept {
  switch (k) {
    case PatchKind::extract_import: return "extract_import";
    case PatchKind::strip_class: return "strip_class";
    case PatchKind::strip_function: return "strip_function";
    case PatchKind::unwrap_main: return "unwrap_main";
    case PatchKind::insert_token: return "insert_token";
    case PatchKind::add_import: return "add_import";
    case PatchKind::declare_var: return "declare_var";
    case PatchKind::delete_token: return "delete_token";
    case PatchKind::delete_line: return "delete_line";
  }
  return "?";
}

std::string apply_edits(std::string body, const std::vector<TextEdit>& edits) {
  for (const auto& e : edits) {
    if (e.offset > body.size() || body.compare(e.offset, e.removed.size(), e.removed) != 0) {
      throw Error(ErrorKind::invalid_argument, "edit does not match body at offset " + std::to_string(e.offset));
    }
    body.replace(e.offset, e.removed.size(), e.inserted);
  }
  return body;
}

Replayed replay(std::string_view original, const std::vector<PatchRecord>& patches) {
  Replayed r{std::string(original), {}};
  for (const auto& p : patches) {
    r.body = apply_edits(std::move(r.body), p.edits);
    if (!p.import_removed.empty()) {
      const auto it = std::find(r.imports.begin(), r.imports.end(), p.import_removed);
      if (it != r.imports.end()) r.imports.erase(it);
    }
    if (!p.import_added.empty()) r.imports.push_back(p.import_added);
  }
  return r;
}

Candidate Candidate::from_snippet(const corpus::RawSnippet& s, int retrieval_rank) {
  Candidate c;
  c.id = std::to_string(s.source_answer) + ":" + std::to_string(s.block_index);
  c.source_answer = s.source_answer;
  c.question_id = s.question_id;
  c.block_index = s.block_index;
  c.answer_score = s.answer_score;
  c.retrieval_rank = retrieval_rank;
  c.original = s.text;
  c.body = s.text;
  return c;
}

bool is_blank_body(std::string_view body) {
  return std::all_of(body.begin(), body.end(), [](char ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'; });
}

nlohmann::json to_json(const TextEdit& e) {
  return {{"offset", e.offset}, {"removed", e.removed}, {"inserted", e.inserted}};
}

nlohmann::json to_json(const PatchRecord& p) {
  auto edits = nlohmann::json::array();
  for (const auto& e : p.edits) edits.push_back(to_json(e));
  nlohmann::json j{{"kind", to_string(p.kind)},
                   {"line", p.line},
                   {"edits", std::move(edits)},
                   {"errors_before", p.errors_before},
                   {"errors_after", p.errors_after}};
  if (!p.import_added.empty()) j["import_added"] = p.import_added;
  if (!p.import_removed.empty()) j["import_removed"] = p.import_removed;
  return j;
}

nlohmann::json to_json(const Candidate& c) {
  auto patches = nlohmann::json::array();
  for (const auto& p : c.patches) patches.push_back(to_json(p));
  auto stages = nlohmann::json::object();
  for (int i = 0; i < kStageCount; ++i) {
    stages[std::string(to_string(static_cast<Stage>(i)))] = c.stage_errors[static_cast<std::size_t>(i)];
  }
  return {{"id", c.id},
          {"source_answer", c.source_answer},
          {"question_id", c.question_id},
          {"block_index", c.block_index},
          {"answer_score", c.answer_score},
          {"retrieval_rank", c.retrieval_rank},
          {"original", c.original},
          {"body", c.body},
          {"imports", c.imports},
          {"error_count", c.error_count},
          {"diagnostics", frontend::to_json(c.diagnostics)},
          {"patches", std::move(patches)},
          {"stage", to_string(c.stage)},
          {"stage_errors", std::move(stages)},
          {"deleted_lines", c.deleted_lines},
          {"degenerate", c.degenerate}};
}

Evaluator::Evaluator(frontend::SourceUnit context, pipeline::Cursor cursor, const frontend::TypeRegistry& registry)
    : context_(std::move(context)), cursor_(cursor), registry_(&registry) {
  // Validate the cursor once, up front.
  (void)pipeline::splice(context_, cursor_, {}, {});
}

Evaluator Evaluator::harness(const frontend::TypeRegistry& registry) {
  return Evaluator(pipeline::harness_context(), pipeline::harness_cursor(), registry);
}

Evaluation Evaluator::evaluate(const std::vector<std::string>& imports, std::string_view body) const {
  Evaluation ev;
  ev.spliced = pipeline::splice(context_, cursor_, imports, body);
  auto result = frontend::check(ev.spliced.unit, *registry_);
  ev.diagnostics = std::move(result.diagnostics);
  ev.error_count = static_cast<int>(ev.diagnostics.size());
  return ev;
}

int Evaluator::error_count(const std::vector<std::string>& imports, std::string_view body) const {
  return evaluate(imports, body).error_count;
}

void Evaluator::refresh(Candidate& c) const {
  auto ev = evaluate(c.imports, c.body);
  c.diagnostics = std::move(ev.diagnostics);
  c.error_count = ev.error_count;
}

}  // namespace snipfit::repair
