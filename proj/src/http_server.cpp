#include "conflictkb/http_server.hpp"

#include <httplib.h>

namespace conflictkb {

namespace {

void send(httplib::Response& res, const Service::Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(Service& service) : server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Get("/api/kb", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.get_kb());
  });
  srv.Put("/api/kb", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.put_kb(req.body));
  });
  srv.Post("/api/evaluate", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.evaluate(req.body));
  });
  srv.Post("/api/whatif", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.whatif(req.body));
  });
  srv.Get("/api/series", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.get_series());
  });
  srv.Post("/api/series", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.post_series(req.body));
  });
  srv.Get("/api/evaluate/series", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.evaluate_series());
  });
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace conflictkb
