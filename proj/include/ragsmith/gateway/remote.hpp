#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <semaphore>
#include <string>

#include "json.hpp"
#include "ragsmith/gateway/gateway_types.hpp"

namespace ragsmith::gateway {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
};

/// One JSON-over-HTTP endpoint. The request body is `request_template` with
/// every `{{field}}` replaced by the JSON encoding of that field; the result
/// is the value found at `response_pointer` (RFC 6901) in the reply.
struct EndpointConfig {
  std::string url;
  std::string request_template;
  std::string response_pointer;
  std::string api_key_env;  // name of the variable holding a bearer token
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
  std::size_t max_in_flight = 4;
};

namespace defaults {
inline constexpr const char* kGenerateTemplate =
    R"({"prompt": {{prompt}}, "max_tokens": {{max_tokens}}, "temperature": {{temperature}}, "stop": {{stop}}})";
inline constexpr const char* kGeneratePointer = "/text";
inline constexpr const char* kEmbedTemplate = R"({"input": {{texts}}})";
inline constexpr const char* kEmbedPointer = "/embeddings";
inline constexpr const char* kScoreTemplate =
    R"({"source": {{source}}, "target": {{target}}, "prefix": {{prefix}}})";
inline constexpr const char* kScorePointer = "/score";
}  // namespace defaults

/// Thread-safe. At most max_in_flight requests are outstanding at once;
/// connection failures, 429 and 5xx are retried with exponential backoff,
/// any other failure is final.
class HttpEndpoint {
 public:
  explicit HttpEndpoint(EndpointConfig config);

  nlohmann::json call(const std::map<std::string, nlohmann::json>& fields);
  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  std::string base_;
  std::string path_;
  std::unique_ptr<std::counting_semaphore<1024>> slots_;
};

class RemoteGenerator final : public TextGenerator {
 public:
  explicit RemoteGenerator(EndpointConfig config);
  std::string generate(const GenerationRequest& request) override;

 private:
  HttpEndpoint endpoint_;
};

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(EndpointConfig config, std::size_t batch_size = 64);
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) override;

 private:
  HttpEndpoint endpoint_;
  std::size_t batch_size_;
};

class RemoteScorer final : public SequenceScorer {
 public:
  explicit RemoteScorer(EndpointConfig config);
  SequenceScore score(std::string_view source, std::string_view target,
                      std::string_view prefix) override;

 private:
  HttpEndpoint endpoint_;
};

}  // namespace ragsmith::gateway
