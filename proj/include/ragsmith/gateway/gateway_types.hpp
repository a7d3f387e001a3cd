#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ragsmith::gateway {

struct GenerationRequest {
  std::string prompt;
  std::size_t max_tokens = 1024;
  double temperature = 0.0;
  std::vector<std::string> stop;

  void validate() const;
};

/// Mean per-token log-likelihood of a target given a source; always <= 0.
struct SequenceScore {
  double value = 0.0;
};

/// Raised when a remote call fails for good. attempts() is the number of
/// requests actually sent.
class GatewayError : public std::runtime_error {
 public:
  GatewayError(const std::string& what, int attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// One L2-normalized vector per input, all of the same dimension.
  virtual std::vector<std::vector<float>> embed(std::span<const std::string> texts) = 0;
};

class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;
  /// Scores prefix + target conditioned on source.
  virtual SequenceScore score(std::string_view source, std::string_view target,
                              std::string_view prefix) = 0;
};

/// Cuts text at the earliest occurrence of any stop marker.
std::string apply_stop_markers(std::string text, std::span<const std::string> stop);

/// Scales v to unit L2 norm in place. Throws on a zero vector.
void normalize(std::vector<float>& v);

}  // namespace ragsmith::gateway
