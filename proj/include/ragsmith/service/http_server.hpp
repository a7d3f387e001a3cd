#pragma once

#include <memory>
#include <string>

#include "ragsmith/service/assistant.hpp"

namespace ragsmith::service {

/// JSON HTTP front end for AssistantService:
///   POST /v1/query        {user_id?, question, top_n?} -> QueryResponse
///   GET  /v1/history      ?limit=N (default 20) [&user_id=...]
///   GET  /v1/corpus/stats
///   GET  /healthz         -> {"status":"ok"}
/// The X-User-Id header, when present, takes precedence over the body's
/// user_id. Validation problems answer 400, generation failures 502.
class HttpServer {
 public:
  explicit HttpServer(AssistantService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to host:port; port 0 picks a free port. Returns the bound port.
  /// Throws std::runtime_error when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ragsmith::service
