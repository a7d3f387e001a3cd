#include "ragsmith/service/http_server.hpp"

#include <stdexcept>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace ragsmith::service {
namespace {

constexpr const char* kJson = "application/json";
constexpr std::size_t kDefaultHistoryLimit = 20;

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

std::optional<std::size_t> parse_count(const std::string& value) {
  if (value.empty() || value.size() > 9 || value.find_first_not_of("0123456789") != std::string::npos) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(std::stoul(value));
}

}  // namespace

struct HttpServer::Impl {
  AssistantService& service;
  httplib::Server server;

  explicit Impl(AssistantService& s) : service(s) {}

  void handle_query(const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error&) {
      send_error(res, 400, "request body is not valid JSON");
      return;
    }
    if (!body.is_object() || !body.contains("question") || !body["question"].is_string()) {
      send_error(res, 400, "`question` (string) is required");
      return;
    }
    std::string user_id;
    if (req.has_header("X-User-Id")) {
      user_id = req.get_header_value("X-User-Id");
    } else if (body.contains("user_id") && body["user_id"].is_string()) {
      user_id = body["user_id"].get<std::string>();
    }
    std::optional<std::size_t> top_n;
    if (body.contains("top_n") && !body["top_n"].is_null()) {
      if (!body["top_n"].is_number_unsigned()) {
        send_error(res, 400, "`top_n` must be a positive integer");
        return;
      }
      top_n = body["top_n"].get<std::size_t>();
    }
    try {
      auto response = service.handle_query(user_id, body["question"].get<std::string>(), top_n);
      send_json(res, response.error ? 502 : 200, response.to_json());
    } catch (const corpus::ValidationError& e) {
      send_error(res, 400, e.what());
    }
  }

  void handle_history(const httplib::Request& req, httplib::Response& res) {
    std::size_t limit = kDefaultHistoryLimit;
    if (req.has_param("limit")) {
      auto parsed = parse_count(req.get_param_value("limit"));
      if (!parsed) {
        send_error(res, 400, "`limit` must be a non-negative integer");
        return;
      }
      limit = *parsed;
    }
    std::optional<std::string> user;
    if (req.has_param("user_id")) {
      user = req.get_param_value("user_id");
    }
    auto entries = service.history().all();
    std::vector<corpus::HistoryEntry> selected;
    for (auto it = entries.rbegin(); it != entries.rend() && selected.size() < limit; ++it) {
      if (!user || it->user_id == *user) {
        selected.push_back(*it);
      }
    }
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (auto it = selected.rbegin(); it != selected.rend(); ++it) {
      out.push_back(corpus::to_json(*it));
    }
    send_json(res, 200, {{"entries", out}});
  }

  void install_routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, X-User-Id");
      res.status = 204;
    });
    server.Post("/v1/query", [this](const httplib::Request& req, httplib::Response& res) { handle_query(req, res); });
    server.Get("/v1/history",
               [this](const httplib::Request& req, httplib::Response& res) { handle_history(req, res); });
    server.Get("/v1/corpus/stats", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, service.corpus_stats());
    });
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });
    server.set_exception_handler([](const httplib::Request& req, httplib::Response& res, std::exception_ptr ep) {
      std::string message = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
      }
      spdlog::error("{} {} failed: {}", req.method, req.path, message);
      send_error(res, 500, message);
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_error(res, res.status, res.status == 404 ? "not found" : "request failed");
      }
    });
  }
};

HttpServer::HttpServer(AssistantService& service) : impl_(std::make_unique<Impl>(service)) { impl_->install_routes(); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) {
      throw std::runtime_error("cannot bind " + host);
    }
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) {
    impl_->server.stop();
  }
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace ragsmith::service
