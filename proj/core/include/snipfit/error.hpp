#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snipfit {

enum class ErrorKind {
  ingest,            // corpus violates a CorpusDoc invariant (duplicate id, orphan answer)
  format,            // malformed file or JSON payload
  empty_query,       // no keyword survives processing
  not_compilable,    // evaluation requested on a program with errors
  invalid_argument,  // caller supplied an out-of-contract value
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace snipfit
