#include "ragsmith/gateway/remote.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "ragsmith/common/text.hpp"

namespace ragsmith::gateway {

namespace {

struct SlotGuard {
  explicit SlotGuard(std::counting_semaphore<1024>& s) : sem(s) { sem.acquire(); }
  ~SlotGuard() { sem.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;
  std::counting_semaphore<1024>& sem;
};

bool is_transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpEndpoint::HttpEndpoint(EndpointConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.url.find("://");
  if (config_.url.empty() || scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint url must look like http://host[:port]/path, got `" +
                                config_.url + "`");
  }
  const auto path_start = config_.url.find('/', scheme_end + 3);
  base_ = config_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
  if (config_.retry.max_attempts < 1) {
    throw std::invalid_argument("retry policy needs at least one attempt");
  }
  const auto slots = static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(config_.max_in_flight, 1, 1024));
  slots_ = std::make_unique<std::counting_semaphore<1024>>(slots);
}

nlohmann::json HttpEndpoint::call(const std::map<std::string, nlohmann::json>& fields) {
  std::map<std::string, std::string> encoded;
  for (const auto& [key, value] : fields) {
    encoded[key] = value.dump();
  }
  const auto body = text::render_placeholders(config_.request_template, encoded);
  if (!nlohmann::json::accept(body)) {
    throw GatewayError("request template did not render to valid JSON for " + config_.url, 0);
  }

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  SlotGuard slot(*slots_);
  std::string last_error;
  auto backoff = config_.retry.initial_backoff;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    httplib::Client client(base_);
    const auto timeout_s = config_.timeout.count() / 1000;
    const auto timeout_us = (config_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(timeout_s, timeout_us);
    client.set_read_timeout(timeout_s, timeout_us);
    client.set_write_timeout(timeout_s, timeout_us);

    auto res = client.Post(path_, headers, body, "application/json");
    bool transient = true;
    if (!res) {
      last_error = "connection error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
        return reply.at(nlohmann::json::json_pointer(config_.response_pointer));
      } catch (const std::exception& e) {
        throw GatewayError("malformed reply from " + config_.url + ": " + e.what(), attempt);
      }
    } else {
      last_error = "HTTP " + std::to_string(res->status);
      transient = is_transient_status(res->status);
    }
    if (!transient) {
      throw GatewayError(config_.url + ": " + last_error, attempt);
    }
    if (attempt < config_.retry.max_attempts) {
      spdlog::debug("{}: attempt {} failed ({}), retrying in {} ms", config_.url, attempt, last_error,
                    backoff.count());
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * config_.retry.multiplier));
    }
  }
  throw GatewayError(config_.url + ": " + last_error + " after " +
                         std::to_string(config_.retry.max_attempts) + " attempts",
                     config_.retry.max_attempts);
}

RemoteGenerator::RemoteGenerator(EndpointConfig config) : endpoint_(std::move(config)) {}

std::string RemoteGenerator::generate(const GenerationRequest& request) {
  request.validate();
  const auto value = endpoint_.call({{"prompt", request.prompt},
                                     {"max_tokens", request.max_tokens},
                                     {"temperature", request.temperature},
                                     {"stop", request.stop}});
  if (!value.is_string()) {
    throw GatewayError("generation reply is not a string", 1);
  }
  return apply_stop_markers(value.get<std::string>(), request.stop);
}

RemoteEmbedder::RemoteEmbedder(EndpointConfig config, std::size_t batch_size)
    : endpoint_(std::move(config)), batch_size_(std::max<std::size_t>(batch_size, 1)) {}

std::vector<std::vector<float>> RemoteEmbedder::embed(std::span<const std::string> texts) {
  if (texts.empty()) {
    throw std::invalid_argument("embed: no texts");
  }
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += batch_size_) {
    const auto batch = texts.subspan(begin, std::min(batch_size_, texts.size() - begin));
    const auto value = endpoint_.call({{"texts", std::vector<std::string>(batch.begin(), batch.end())}});
    if (!value.is_array() || value.size() != batch.size()) {
      throw GatewayError("embedding reply has the wrong number of vectors", 1);
    }
    for (const auto& item : value) {
      auto v = item.get<std::vector<float>>();
      if (v.empty() || (!out.empty() && v.size() != out.front().size())) {
        throw GatewayError("embedding reply has inconsistent dimensions", 1);
      }
      normalize(v);
      out.push_back(std::move(v));
    }
  }
  return out;
}

RemoteScorer::RemoteScorer(EndpointConfig config) : endpoint_(std::move(config)) {}

SequenceScore RemoteScorer::score(std::string_view source, std::string_view target,
                                  std::string_view prefix) {
  if (target.empty()) {
    throw std::invalid_argument("score_sequence: empty target");
  }
  const auto value = endpoint_.call(
      {{"source", std::string(source)}, {"target", std::string(target)}, {"prefix", std::string(prefix)}});
  if (!value.is_number()) {
    throw GatewayError("score reply is not a number", 1);
  }
  const double v = value.get<double>();
  if (!std::isfinite(v) || v > 0.0) {
    throw GatewayError("score reply must be a finite log-likelihood <= 0", 1);
  }
  return {v};
}

}  // namespace ragsmith::gateway
