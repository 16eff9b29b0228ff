#include "snipfit/corpus/index.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snipfit/error.hpp"

namespace snipfit::corpus {

std::size_t InvertedIndex::posting_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, ids] : postings_) n += ids.size();
  return n;
}

std::vector<PostId> InvertedIndex::answers_of(PostId question) const {
  if (auto it = answers_.find(question); it != answers_.end()) return it->second;
  return {};
}

std::vector<PostId> InvertedIndex::matching_questions(std::string_view task) const {
  const auto keywords = KeywordProcessor::shared(options_).process(task);
  if (keywords.empty()) {
    throw Error(ErrorKind::empty_query, "no keyword survives processing of '" + std::string(task) + "'");
  }
  std::vector<const std::set<PostId>*> sets;
  for (const auto& kw : keywords) {
    auto it = postings_.find(kw.processed);
    if (it == postings_.end()) return {};
    sets.push_back(&it->second);
  }
  std::sort(sets.begin(), sets.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  std::vector<PostId> out;
  for (PostId id : *sets.front()) {
    if (std::all_of(sets.begin() + 1, sets.end(), [id](auto* s) { return s->count(id) > 0; }))
      out.push_back(id);
  }
  return out;
}

std::vector<RawSnippet> InvertedIndex::query(std::string_view task) const {
  std::vector<RawSnippet> out;
  for (PostId q : matching_questions(task)) {
    for (PostId a : answers_of(q)) {
      auto snippets = extract_snippets(docs_.at(a));
      out.insert(out.end(), std::make_move_iterator(snippets.begin()),
                 std::make_move_iterator(snippets.end()));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const RawSnippet& a, const RawSnippet& b) {
    if (a.answer_score != b.answer_score) return a.answer_score > b.answer_score;
    if (a.source_answer != b.source_answer) return a.source_answer < b.source_answer;
    return a.block_index < b.block_index;
  });
  return out;
}

std::vector<std::string> InvertedIndex::suggest_tasks(std::string_view prefix, std::size_t limit) const {
  std::vector<std::string> out;
  if (tokenize(prefix).empty()) {
    for (const auto& t : task_titles_) {
      if (out.size() >= limit) break;
      out.push_back(t);
    }
    return out;
  }
  const auto& proc = KeywordProcessor::shared(options_);
  const auto wanted = proc.process(prefix);
  if (wanted.empty()) return out;
  for (const auto& title : task_titles_) {
    if (out.size() >= limit) break;
    const auto have = proc.process(title);
    const bool all = std::all_of(wanted.begin(), wanted.end(), [&](const Keyword& w) {
      return std::any_of(have.begin(), have.end(), [&](const Keyword& h) { return h.processed == w.processed; });
    });
    if (all) out.push_back(title);
  }
  return out;
}

void InvertedIndex::save(std::ostream& out) const {
  nlohmann::json j;
  j["options"] = {{"mode", to_string(options_.mode)}, {"omit_stop", options_.omit_stop}};
  auto& docs = j["docs"] = nlohmann::json::array();
  for (const auto& [_, doc] : docs_) docs.push_back(to_json(doc));
  auto& postings = j["postings"] = nlohmann::json::object();
  for (const auto& [kw, ids] : postings_) postings[kw] = std::vector<PostId>(ids.begin(), ids.end());
  j["task_titles"] = task_titles_;
  out << kIndexMagic << ' ' << kIndexFormatVersion << '\n' << j.dump() << '\n';
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write index '" + path.string() + "'");
  save(out);
}

InvertedIndex InvertedIndex::load(std::istream& in) {
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  hs >> magic >> version;
  if (magic != kIndexMagic) throw Error(ErrorKind::format, "not a snipfit index (bad magic)");
  if (version != kIndexFormatVersion) {
    throw Error(ErrorKind::format, "unsupported index format version " + std::to_string(version));
  }
  InvertedIndex index;
  try {
    const auto j = nlohmann::json::parse(in);
    index.options_.mode = parse_keyword_mode(j.at("options").at("mode").get<std::string>());
    index.options_.omit_stop = j.at("options").at("omit_stop").get<bool>();
    for (const auto& d : j.at("docs")) {
      auto doc = doc_from_json(d);
      if (doc.kind == DocKind::answer && doc.parent_id) index.answers_[*doc.parent_id].push_back(doc.id);
      const PostId id = doc.id;
      index.docs_.emplace(id, std::move(doc));
    }
    for (auto& [_, ids] : index.answers_) std::sort(ids.begin(), ids.end());
    for (const auto& [kw, ids] : j.at("postings").items()) {
      auto& set = index.postings_[kw];
      for (const auto& id : ids) {
        const auto pid = id.get<PostId>();
        if (!index.docs_.count(pid)) throw Error(ErrorKind::format, "posting references unknown post " + std::to_string(pid));
        set.insert(pid);
      }
    }
    index.task_titles_ = j.at("task_titles").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("malformed index: ") + e.what());
  }
  return index;
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open index '" + path.string() + "'");
  return load(in);
}

IndexBuilder::IndexBuilder(KeywordOptions options) { index_.options_ = options; }

void IndexBuilder::add(CorpusDoc doc) {
  if (index_.docs_.count(doc.id)) {
    throw Error(ErrorKind::ingest, "duplicate post id " + std::to_string(doc.id));
  }
  if (doc.kind == DocKind::question) {
    if (doc.title.empty()) throw Error(ErrorKind::ingest, "question " + std::to_string(doc.id) + " has no title");
    for (const auto& kw : KeywordProcessor::shared(index_.options_).process(doc.title)) {
      index_.postings_[kw.processed].insert(doc.id);
    }
  } else {
    if (!doc.parent_id) throw Error(ErrorKind::ingest, "answer " + std::to_string(doc.id) + " has no parent_id");
    index_.answers_[*doc.parent_id].push_back(doc.id);
  }
  const PostId id = doc.id;
  index_.docs_.emplace(id, std::move(doc));
}

void IndexBuilder::set_task_titles(std::vector<std::string> titles) { index_.task_titles_ = std::move(titles); }

InvertedIndex IndexBuilder::finish() && {
  for (auto& [question, answers] : index_.answers_) {
    auto it = index_.docs_.find(question);
    if (it == index_.docs_.end() || it->second.kind != DocKind::question) {
      throw Error(ErrorKind::ingest, "answer " + std::to_string(answers.front()) +
                                         " references missing question " + std::to_string(question));
    }
    std::sort(answers.begin(), answers.end());
  }
  return std::move(index_);
}

InvertedIndex build_index(const std::vector<CorpusDoc>& docs, KeywordOptions options,
                          std::vector<std::string> task_titles) {
  IndexBuilder builder(options);
  for (const auto& d : docs) builder.add(d);
  builder.set_task_titles(std::move(task_titles));
  return std::move(builder).finish();
}

}  // namespace snipfit::corpus
