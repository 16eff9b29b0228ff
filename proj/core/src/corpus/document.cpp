#include "snipfit/corpus/document.hpp"

#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "snipfit/error.hpp"

namespace snipfit::corpus {

namespace {

bool is_fence(std::string_view line) {
  const auto first = line.find_first_not_of(" \t");
  return first != std::string_view::npos && line.substr(first, 3) == "```";
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

std::vector<RawSnippet> extract_snippets(const CorpusDoc& doc) {
  std::vector<RawSnippet> out;
  if (doc.kind != DocKind::answer) return out;

  std::string_view body(doc.body);
  bool inside = false;
  std::string block;
  bool block_has_line = false;
  auto emit = [&] {
    if (!is_blank(block)) {
      out.push_back(RawSnippet{doc.id, doc.parent_id.value_or(0), static_cast<int>(out.size()), block,
                               doc.score});
    }
    block.clear();
    block_has_line = false;
  };

  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t nl = body.find('\n', pos);
    std::string_view line = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_fence(line)) {
      if (inside) emit();
      inside = !inside;
    } else if (inside) {
      if (block_has_line) block.push_back('\n');
      block.append(line);
      block_has_line = true;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (inside) emit();
  return out;
}

nlohmann::json to_json(const CorpusDoc& doc) {
  nlohmann::json j;
  j["id"] = doc.id;
  j["kind"] = doc.kind == DocKind::question ? "question" : "answer";
  j["parent_id"] = doc.parent_id ? nlohmann::json(*doc.parent_id) : nlohmann::json(nullptr);
  j["title"] = doc.title;
  j["body"] = doc.body;
  j["score"] = doc.score;
  j["tags"] = doc.tags;
  return j;
}

CorpusDoc doc_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::format, "corpus record is not a JSON object");
  CorpusDoc doc;
  try {
    doc.id = j.at("id").get<PostId>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "question") {
      doc.kind = DocKind::question;
    } else if (kind == "answer") {
      doc.kind = DocKind::answer;
    } else {
      throw Error(ErrorKind::format, "unknown kind '" + kind + "'");
    }
    if (auto it = j.find("parent_id"); it != j.end() && !it->is_null()) doc.parent_id = it->get<PostId>();
    if (auto it = j.find("title"); it != j.end() && !it->is_null()) doc.title = it->get<std::string>();
    doc.body = j.at("body").get<std::string>();
    if (auto it = j.find("score"); it != j.end() && !it->is_null()) doc.score = it->get<int>();
    if (auto it = j.find("tags"); it != j.end() && !it->is_null())
      doc.tags = it->get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, e.what());
  }
  return doc;
}

std::vector<CorpusDoc> read_corpus(std::istream& in) {
  std::vector<CorpusDoc> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(doc_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::format, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::format, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<CorpusDoc> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open corpus '" + path.string() + "'");
  return read_corpus(in);
}

}  // namespace snipfit::corpus
