#pragma once

#include <memory>
#include <string>

#include "conflictkb/service.hpp"

namespace httplib {
class Server;
}

namespace conflictkb {

/// HTTP/JSON front end over a Service.
///
///   GET  /api/kb              current knowledge base
///   PUT  /api/kb              replace the KB or the whole scenario (atomic)
///   POST /api/evaluate        evaluate one request
///   POST /api/whatif          baseline vs. adjusted evaluation
///   GET  /api/series          bound leaf series
///   POST /api/series          replace the series (document or CSV + bindings)
///   GET  /api/evaluate/series G(t) and per-subject degree series
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to @p port (0 picks a free port) and returns the bound port, or
  /// -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop() is called.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace conflictkb
