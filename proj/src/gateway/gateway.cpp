#include "ragsmith/gateway/gateway.hpp"

#include "ragsmith/common/text.hpp"
#include "ragsmith/gateway/lexical_scorer.hpp"
#include "ragsmith/gateway/stubs.hpp"

namespace ragsmith::gateway {

namespace {

EndpointConfig endpoint_from(const KeyValueConfig& kv, const std::string& name,
                             const char* default_template, const char* default_pointer) {
  EndpointConfig e;
  e.url = kv.get_or("gateway." + name + "_url", "");
  e.request_template = kv.get_or("gateway." + name + "_template", default_template);
  e.response_pointer = kv.get_or("gateway." + name + "_response", default_pointer);
  e.api_key_env = kv.get_or("gateway.api_key_env", "");
  e.timeout = std::chrono::milliseconds(kv.get_int("gateway.timeout_ms", 30000));
  e.retry.max_attempts = static_cast<int>(kv.get_int("gateway.max_attempts", 3));
  e.retry.initial_backoff = std::chrono::milliseconds(kv.get_int("gateway.backoff_ms", 250));
  e.max_in_flight = static_cast<std::size_t>(kv.get_int("gateway.max_in_flight", 4));
  return e;
}

}  // namespace

GatewayConfig GatewayConfig::from_config(const KeyValueConfig& kv) {
  GatewayConfig config;
  const auto mode = text::to_lower(kv.get_or("gateway.mode", "stub"));
  if (mode == "remote") {
    config.mode = Mode::Remote;
  } else if (mode == "stub") {
    config.mode = Mode::Stub;
  } else {
    throw std::runtime_error("gateway.mode must be `remote` or `stub`, got `" + mode + "`");
  }
  config.generate = endpoint_from(kv, "generate", defaults::kGenerateTemplate, defaults::kGeneratePointer);
  config.embed = endpoint_from(kv, "embed", defaults::kEmbedTemplate, defaults::kEmbedPointer);
  config.score = endpoint_from(kv, "score", defaults::kScoreTemplate, defaults::kScorePointer);
  config.stub_embedding_dim = static_cast<std::size_t>(kv.get_int("gateway.embedding_dim", 256));
  return config;
}

Gateway Gateway::create(const GatewayConfig& config, std::shared_ptr<TextGenerator> stub_generator) {
  Gateway g;
  const bool remote = config.mode == Mode::Remote;
  g.generator = remote && !config.generate.url.empty()
                    ? std::make_shared<RemoteGenerator>(config.generate)
                    : std::move(stub_generator);
  g.embedder = remote && !config.embed.url.empty()
                   ? std::shared_ptr<Embedder>(std::make_shared<RemoteEmbedder>(config.embed))
                   : std::make_shared<HashEmbedder>(config.stub_embedding_dim);
  g.scorer = remote && !config.score.url.empty()
                 ? std::shared_ptr<SequenceScorer>(std::make_shared<RemoteScorer>(config.score))
                 : std::make_shared<LexicalOracleScorer>();
  if (!g.generator) {
    throw std::runtime_error("gateway: no generator available");
  }
  return g;
}

}  // namespace ragsmith::gateway
