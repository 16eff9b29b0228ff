#pragma once

#include <cstddef>
#include <memory>

#include "snipfit/corpus/index.hpp"
#include "snipfit/interface/config.hpp"

namespace snipfit::interface {

/// JSON-over-HTTP front end for the pipeline. Endpoints are listed in
/// docs/api.md. Sessions live in memory and expire after `session_ttl`
/// without access.
class Service {
 public:
  Service(Config config, corpus::InvertedIndex index);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds `config.host:config.port` and serves from a background thread.
  /// Returns the bound port. Throws Error(io) when binding fails.
  int start();
  /// Stops serving and waits for in-flight session work.
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  [[nodiscard]] int port() const;
  [[nodiscard]] std::size_t session_count() const;
  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t evict_expired();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace snipfit::interface
