#pragma once

#include <cstddef>
#include <memory>

#include "ragsmith/common/kv_config.hpp"
#include "ragsmith/gateway/gateway_types.hpp"
#include "ragsmith/gateway/remote.hpp"

namespace ragsmith::gateway {

enum class Mode { Remote, Stub };

struct GatewayConfig {
  Mode mode = Mode::Stub;
  EndpointConfig generate;
  EndpointConfig embed;
  EndpointConfig score;
  std::size_t stub_embedding_dim = 256;

  /// Reads the `gateway.*` keys:
  ///   gateway.mode = remote | stub
  ///   gateway.generate_url / embed_url / score_url
  ///   gateway.{generate,embed,score}_template, ..._response (JSON pointer)
  ///   gateway.api_key_env, gateway.timeout_ms, gateway.max_attempts,
  ///   gateway.backoff_ms, gateway.max_in_flight, gateway.embedding_dim
  static GatewayConfig from_config(const KeyValueConfig& kv);
};

/// The three model capabilities behind one handle.
struct Gateway {
  std::shared_ptr<TextGenerator> generator;
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<SequenceScorer> scorer;

  /// Remote mode builds HTTP clients for every configured URL (an empty URL
  /// falls back to the stub for that capability). Stub mode uses
  /// `stub_generator`, HashEmbedder and LexicalOracleScorer.
  static Gateway create(const GatewayConfig& config, std::shared_ptr<TextGenerator> stub_generator);
};

}  // namespace ragsmith::gateway
