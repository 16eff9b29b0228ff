#include "snipfit/interface/service.hpp"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "snipfit/error.hpp"
#include "snipfit/testkit/testkit.hpp"

namespace snipfit::interface {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::string_view kLandingPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>snipfit</title></head>
<body><h1>snipfit service</h1>
<p>The JSON API is described in docs/api.md. Start the service with
<code>--static-dir</code> to serve the workbench build from this route.</p>
</body></html>
)";

struct SessionRecord {
  std::unique_ptr<pipeline::TaskSession> session;
  std::thread worker;
  std::mutex op_mu;  // one mutating call at a time
  std::mutex done_mu;
  std::condition_variable done_cv;
  bool done = false;
  std::string failure;
  Clock::time_point last_access = Clock::now();

  void wait_done() {
    std::unique_lock lock(done_mu);
    done_cv.wait(lock, [&] { return done; });
  }

  ~SessionRecord() {
    if (worker.joinable()) worker.join();
  }
};

struct BadRequest {
  std::string message;
  json fields = json::object();
};

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message, const json& fields = json::object()) {
  json body{{"error", message}};
  if (!fields.empty()) body["fields"] = fields;
  reply(res, status, body);
}

json parse_object(const httplib::Request& req, bool allow_empty) {
  if (req.body.empty() && allow_empty) return json::object();
  json j;
  try {
    j = json::parse(req.body);
  } catch (const json::exception& e) {
    throw BadRequest{std::string("body is not valid JSON: ") + e.what()};
  }
  if (!j.is_object()) throw BadRequest{"body must be a JSON object"};
  return j;
}

template <typename T>
std::optional<T> field(const json& body, const char* name, const char* expected) {
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw BadRequest{"invalid field", json{{name, std::string("expected ") + expected}}};
  }
}

std::uint64_t query_u64(const httplib::Request& req, const char* name, std::uint64_t fallback) {
  if (!req.has_param(name)) return fallback;
  const auto v = req.get_param_value(name);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw BadRequest{"invalid query parameter", json{{name, "expected a non-negative integer"}}};
  }
  return out;
}

bool query_flag(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return false;
  const auto v = req.get_param_value(name);
  return v.empty() || v == "1" || v == "true";
}

}  // namespace

struct Service::Impl {
  Config config;
  corpus::InvertedIndex index;
  httplib::Server server;
  std::thread server_thread;
  std::mutex join_mu;
  int bound_port = 0;

  mutable std::mutex mu;
  std::map<std::string, std::shared_ptr<SessionRecord>> sessions;
  std::uint64_t next_id = 1;

  Impl(Config c, corpus::InvertedIndex i) : config(std::move(c)), index(std::move(i)) {
    config.validate();
    routes();
  }

  std::shared_ptr<SessionRecord> find(const std::string& id) {
    evict();
    std::lock_guard lock(mu);
    const auto it = sessions.find(id);
    if (it == sessions.end()) return nullptr;
    it->second->last_access = Clock::now();
    return it->second;
  }

  std::size_t evict() {
    std::vector<std::shared_ptr<SessionRecord>> expired;
    {
      std::lock_guard lock(mu);
      const auto now = Clock::now();
      for (auto it = sessions.begin(); it != sessions.end();) {
        if (now - it->second->last_access > config.session_ttl) {
          expired.push_back(std::move(it->second));
          it = sessions.erase(it);
        } else {
          ++it;
        }
      }
    }
    return expired.size();  // joined outside the lock as the records drop
  }

  /// Wraps a handler: JSON errors for bad requests, unknown sessions and library errors.
  template <typename F>
  httplib::Server::Handler guarded(F f) {
    return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const BadRequest& e) {
        reply_error(res, 400, e.message, e.fields);
      } catch (const Error& e) {
        const int status = e.kind() == ErrorKind::invalid_argument || e.kind() == ErrorKind::format ? 400 : 500;
        reply_error(res, status, e.what());
      } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
      }
    };
  }

  template <typename F>
  httplib::Server::Handler with_session(F f) {
    return guarded([this, f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const auto rec = find(id);
      if (!rec) {
        reply_error(res, 404, "unknown session '" + id + "'");
        return;
      }
      f(*rec, req, res);
    });
  }

  void routes() {
    server.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::size_t n = 0;
      {
        std::lock_guard lock(mu);
        n = sessions.size();
      }
      reply(res, 200,
            {{"status", "ok"},
             {"version", SNIPFIT_VERSION},
             {"sessions", n},
             {"index",
              {{"documents", index.docs().size()},
               {"keywords", index.postings().size()},
               {"mode", corpus::to_string(index.options().mode)},
               {"omit_stop", index.options().omit_stop}}}});
    }));

    server.Get("/tasks/suggest", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto limit = query_u64(req, "limit", config.suggestion_limit);
      const auto prefix = req.has_param("prefix") ? req.get_param_value("prefix") : std::string();
      reply(res, 200, {{"prefix", prefix}, {"suggestions", index.suggest_tasks(prefix, limit)}});
    }));

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_object(req, false);
      const auto task = field<std::string>(body, "task", "a string");
      if (!task) throw BadRequest{"missing field", json{{"task", "required string"}}};
      const auto file = field<std::string>(body, "file", "a string").value_or("");
      std::optional<pipeline::Cursor> cursor;
      if (const auto it = body.find("cursor"); it != body.end() && !it->is_null()) {
        if (!it->is_object() || !it->contains("line") || !it->contains("col") || !it->at("line").is_number_integer() ||
            !it->at("col").is_number_integer()) {
          throw BadRequest{"invalid field", json{{"cursor", "expected {\"line\": int, \"col\": int}"}}};
        }
        cursor = pipeline::Cursor{it->at("line").get<int>(), it->at("col").get<int>()};
      }
      const bool wait = field<bool>(body, "wait", "a boolean").value_or(false);

      auto rec = std::make_shared<SessionRecord>();
      try {
        rec->session = make_session(config, *task, file, cursor);
      } catch (const Error& e) {
        throw BadRequest{"invalid session", json{{"cursor", e.what()}}};
      }
      std::string id;
      {
        std::lock_guard lock(mu);
        id = "s" + std::to_string(next_id++);
        sessions.emplace(id, rec);
      }
      rec->worker = std::thread([this, r = rec.get()] {
        try {
          pipeline::process_task(*r->session, index);
        } catch (const std::exception& e) {
          r->failure = e.what();
          r->session->finish(pipeline::SessionStatus::complete);
        }
        {
          std::lock_guard lock(r->done_mu);
          r->done = true;
        }
        r->done_cv.notify_all();
      });
      if (wait) rec->wait_done();
      reply(res, 201, {{"id", id}, {"session", pipeline::to_json(*rec->session)}});
    }));

    server.Get(R"(/sessions/([A-Za-z0-9]+))",
               with_session([](SessionRecord& rec, const httplib::Request& req, httplib::Response& res) {
                 const auto since = query_u64(req, "since", 0);
                 if (query_flag(req, "wait")) rec.wait_done();
                 reply(res, 200, pipeline::to_json(*rec.session, since));
               }));

    server.Post(R"(/sessions/([A-Za-z0-9]+)/cycle)",
                with_session([](SessionRecord& rec, const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_object(req, true);
                  const int direction = field<int>(body, "direction", "1 or -1").value_or(1);
                  if (direction != 1 && direction != -1) {
                    throw BadRequest{"invalid field", json{{"direction", "expected 1 or -1"}}};
                  }
                  std::lock_guard lock(rec.op_mu);
                  try {
                    rec.session->cycle(direction);
                  } catch (const Error& e) {
                    reply_error(res, 409, e.what());
                    return;
                  }
                  reply(res, 200, pipeline::to_json(*rec.session));
                }));

    server.Get(R"(/sessions/([A-Za-z0-9]+)/suggest-types)",
               with_session([this](SessionRecord& rec, const httplib::Request&, httplib::Response& res) {
                 rec.wait_done();
                 json out = json::array();
                 for (const auto& sig : testkit::suggest_for_session(*rec.session, config.type_suggestion_limit)) {
                   auto j = testkit::to_json(sig);
                   try {
                     j["skeleton"] = testkit::generate_test_skeleton(sig).source;
                   } catch (const Error&) {
                     j["skeleton"] = nullptr;  // a type without a default value
                   }
                   out.push_back(std::move(j));
                 }
                 reply(res, 200, {{"suggestions", out}});
               }));

    server.Post(R"(/sessions/([A-Za-z0-9]+)/tests)",
                with_session([this](SessionRecord& rec, const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_object(req, false);
                  const auto it = body.find("signature");
                  if (it == body.end() || it->is_null()) {
                    throw BadRequest{"missing field", json{{"signature", "required: \"(T, ...)->R\" or {args, ret}"}}};
                  }
                  testkit::TypeSignature sig;
                  try {
                    sig = testkit::signature_from_json(*it);
                  } catch (const Error& e) {
                    throw BadRequest{"invalid field", json{{"signature", e.what()}}};
                  }
                  auto source = field<std::string>(body, "test_source", "a string");
                  const auto limit = field<std::size_t>(body, "limit", "a non-negative integer").value_or(0);
                  if (!source) {
                    try {
                      source = testkit::generate_test_skeleton(sig).source;
                    } catch (const Error& e) {
                      throw BadRequest{"invalid field", json{{"signature", e.what()}}};
                    }
                  }
                  const testkit::TestCase test{*source, true};
                  if (const auto problems = testkit::check_test(test, sig); !problems.empty()) {
                    throw BadRequest{"test does not compile against " + testkit::to_string(sig),
                                     json{{"test_source", problems}}};
                  }
                  rec.wait_done();
                  std::lock_guard lock(rec.op_mu);
                  testkit::TestOptions opts;
                  opts.budget = config.budget();
                  opts.limit = limit;
                  const auto results = testkit::test_candidates(*rec.session, test, sig, opts);
                  json out = json::array();
                  for (const auto& [id, r] : results) {
                    out.push_back({{"id", id},
                                   {"status", r.status},
                                   {"detail", r.detail},
                                   {"elapsed_ms", r.elapsed_ms},
                                   {"function_source", r.function_source}});
                  }
                  reply(res, 200,
                        {{"signature", testkit::to_json(sig)},
                         {"test_source", *source},
                         {"results", out},
                         {"session", pipeline::to_json(*rec.session)}});
                }));

    if (!config.static_dir.empty()) {
      if (!server.set_mount_point("/", config.static_dir.string())) {
        throw Error(ErrorKind::io, "static directory " + config.static_dir.string() + " does not exist");
      }
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(std::string(kLandingPage), "text/html");
      });
    }
  }
};

Service::Service(Config config, corpus::InvertedIndex index)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(index))) {}

Service::~Service() { stop(); }

int Service::start() {
  auto& s = impl_->server;
  const auto& host = impl_->config.host;
  if (impl_->config.port == 0) {
    impl_->bound_port = s.bind_to_any_port(host);
  } else {
    impl_->bound_port = s.bind_to_port(host, impl_->config.port) ? impl_->config.port : -1;
  }
  if (impl_->bound_port <= 0) {
    throw Error(ErrorKind::io, "cannot bind " + host + ":" + std::to_string(impl_->config.port));
  }
  impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->bound_port;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  {
    std::lock_guard lock(impl_->join_mu);
    if (impl_->server_thread.joinable()) impl_->server_thread.join();
  }
  std::map<std::string, std::shared_ptr<SessionRecord>> drained;
  {
    std::lock_guard lock(impl_->mu);
    drained.swap(impl_->sessions);
  }
}

void Service::wait() {
  std::lock_guard lock(impl_->join_mu);
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

int Service::port() const { return impl_->bound_port; }

std::size_t Service::session_count() const {
  std::lock_guard lock(impl_->mu);
  return impl_->sessions.size();
}

std::size_t Service::evict_expired() { return impl_->evict(); }

}  // namespace snipfit::interface
