#include "snipfit/interface/config.hpp"

#include <charconv>

#include "snipfit/error.hpp"

namespace snipfit::interface {

void Config::validate() const {
  if (timeout.count() <= 0) throw Error(ErrorKind::invalid_argument, "timeout must be positive");
  if (max_steps == 0) throw Error(ErrorKind::invalid_argument, "step budget must be positive");
  if (suggestion_limit == 0 || type_suggestion_limit == 0) {
    throw Error(ErrorKind::invalid_argument, "suggestion limits must be positive");
  }
  if (session_ttl.count() <= 0) throw Error(ErrorKind::invalid_argument, "session TTL must be positive");
  if (port < 0 || port > 65535) throw Error(ErrorKind::invalid_argument, "port out of range");
}

runtime::Budget Config::budget() const {
  runtime::Budget b;
  b.max_steps = max_steps;
  b.wall = timeout;
  return b;
}

pipeline::SessionOptions Config::session_options() const {
  pipeline::SessionOptions o;
  o.cascade.deletion = deletion;
  return o;
}

corpus::InvertedIndex load_index(const Config& config) {
  if (!config.index_path.empty() && std::filesystem::exists(config.index_path)) {
    auto index = corpus::InvertedIndex::load(config.index_path);
    if (!(index.options() == config.keywords)) {
      throw Error(ErrorKind::invalid_argument,
                  "index " + config.index_path.string() + " was built with mode " +
                      std::string(corpus::to_string(index.options().mode)) +
                      (index.options().omit_stop ? " (omit stop words)" : " (keep stop words)") +
                      "; rebuild it or pass matching --mode/--omit-stop");
    }
    return index;
  }
  if (config.corpus_path.empty()) {
    throw Error(ErrorKind::io, config.index_path.empty() ? "no corpus or index given"
                                                         : "index " + config.index_path.string() + " not found");
  }
  return corpus::build_index(corpus::load_corpus(config.corpus_path), config.keywords);
}

pipeline::Cursor parse_cursor(std::string_view text) {
  const auto colon = text.find(':');
  pipeline::Cursor c{0, 0};
  const auto bad = [&] { return Error(ErrorKind::invalid_argument, "cursor must be LINE:COL, got '" + std::string(text) + "'"); };
  if (colon == std::string_view::npos) throw bad();
  const auto line = text.substr(0, colon);
  const auto col = text.substr(colon + 1);
  if (std::from_chars(line.data(), line.data() + line.size(), c.line).ec != std::errc{} ||
      std::from_chars(col.data(), col.data() + col.size(), c.col).ec != std::errc{}) {
    throw bad();
  }
  return c;
}

std::unique_ptr<pipeline::TaskSession> make_session(const Config& config, std::string task, std::string file_text,
                                                    std::optional<pipeline::Cursor> cursor) {
  if (file_text.empty()) {
    file_text = pipeline::harness_context().text();
    if (!cursor) cursor = pipeline::harness_cursor();
  }
  if (!cursor) throw Error(ErrorKind::invalid_argument, "a cursor is required with a user file");
  return std::make_unique<pipeline::TaskSession>(std::move(task),
                                                 frontend::SourceUnit(std::move(file_text), frontend::Origin::user_file),
                                                 *cursor, config.session_options());
}

}  // namespace snipfit::interface
