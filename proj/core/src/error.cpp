#include "snipfit/error.hpp"

namespace snipfit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ingest: return "ingest";
    case ErrorKind::format: return "format";
    case ErrorKind::empty_query: return "empty_query";
    case ErrorKind::not_compilable: return "not_compilable";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace snipfit
