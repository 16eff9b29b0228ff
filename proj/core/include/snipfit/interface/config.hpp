#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "snipfit/corpus/index.hpp"
#include "snipfit/pipeline/session.hpp"
#include "snipfit/repair/deletion.hpp"
#include "snipfit/runtime/sandbox.hpp"

namespace snipfit::interface {

struct Config {
  std::filesystem::path corpus_path;
  std::filesystem::path index_path;
  corpus::KeywordOptions keywords;
  repair::DeletionConfig deletion;
  std::chrono::milliseconds timeout{2000};
  std::uint64_t max_steps = 10'000'000;
  std::size_t suggestion_limit = 10;       // task suggestions
  std::size_t type_suggestion_limit = 5;   // signatures per session
  std::string host = "127.0.0.1";
  int port = 8077;  // 0 picks a free port
  std::chrono::seconds session_ttl{30 * 60};
  std::filesystem::path static_dir;  // empty: built-in landing page

  /// Throws Error(invalid_argument) for non-positive budgets or limits.
  void validate() const;
  [[nodiscard]] runtime::Budget budget() const;
  [[nodiscard]] pipeline::SessionOptions session_options() const;
};

/// Loads `index_path` when set and present, otherwise builds from
/// `corpus_path`. Throws Error(invalid_argument) when a loaded index was built
/// with keyword options other than the configured ones, Error(io) when
/// neither source is available.
corpus::InvertedIndex load_index(const Config& config);

/// "12:5" -> {12, 5}. Throws Error(invalid_argument).
pipeline::Cursor parse_cursor(std::string_view text);

/// Session over `file_text` at `cursor`; an empty file means the empty class
/// + main harness at its body line. Throws Error(invalid_argument) for a cursor
/// outside the file.
std::unique_ptr<pipeline::TaskSession> make_session(const Config& config, std::string task, std::string file_text,
                                                    std::optional<pipeline::Cursor> cursor);

}  // namespace snipfit::interface
