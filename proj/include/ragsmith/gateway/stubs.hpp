#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "ragsmith/gateway/gateway_types.hpp"

namespace ragsmith::gateway {

/// Returns canned text for exact prompts, else the fallback (or throws
/// GatewayError when no fallback is configured). Stop markers apply.
class CannedGenerator final : public TextGenerator {
 public:
  explicit CannedGenerator(std::map<std::string, std::string> responses,
                           std::optional<std::string> fallback = std::nullopt);
  std::string generate(const GenerationRequest& request) override;

 private:
  std::map<std::string, std::string> responses_;
  std::optional<std::string> fallback_;
};

/// Wraps an arbitrary pure function of the request. Stop markers apply.
class FunctionGenerator final : public TextGenerator {
 public:
  using Fn = std::function<std::string(const GenerationRequest&)>;
  explicit FunctionGenerator(Fn fn) : fn_(std::move(fn)) {}
  std::string generate(const GenerationRequest& request) override;

 private:
  Fn fn_;
};

/// Deterministic offline embedder. Every token contributes a pseudo-random
/// Gaussian direction seeded by its hash, so texts sharing vocabulary point
/// in similar directions; token-less text gets a direction seeded by the
/// whole string. Output is unit length and identical across runs and
/// platforms.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dimension = 256);
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) override;
  std::vector<float> embed_one(std::string_view text) const;
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_;
};

}  // namespace ragsmith::gateway
