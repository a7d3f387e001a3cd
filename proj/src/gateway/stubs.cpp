#include "ragsmith/gateway/stubs.hpp"

#include <cmath>
#include <numbers>

#include "ragsmith/common/text.hpp"

namespace ragsmith::gateway {

namespace {

// splitmix64: small, portable and well distributed.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_open(std::uint64_t bits) {
  // (0, 1): never exactly zero so log() below is finite.
  return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

void add_gaussian_direction(std::vector<double>& acc, std::uint64_t seed) {
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < acc.size(); i += 2) {
    const double u1 = unit_open(splitmix64(state));
    const double u2 = unit_open(splitmix64(state));
    const double r = std::sqrt(-2.0 * std::log(u1));
    acc[i] += r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < acc.size()) {
      acc[i + 1] += r * std::sin(2.0 * std::numbers::pi * u2);
    }
  }
}

}  // namespace

CannedGenerator::CannedGenerator(std::map<std::string, std::string> responses,
                                 std::optional<std::string> fallback)
    : responses_(std::move(responses)), fallback_(std::move(fallback)) {}

std::string CannedGenerator::generate(const GenerationRequest& request) {
  request.validate();
  if (auto it = responses_.find(request.prompt); it != responses_.end()) {
    return apply_stop_markers(it->second, request.stop);
  }
  if (fallback_) {
    return apply_stop_markers(*fallback_, request.stop);
  }
  throw GatewayError("canned generator: no response for prompt", 1);
}

std::string FunctionGenerator::generate(const GenerationRequest& request) {
  request.validate();
  return apply_stop_markers(fn_(request), request.stop);
}

HashEmbedder::HashEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) {
    throw std::invalid_argument("embedding dimension must be positive");
  }
}

std::vector<float> HashEmbedder::embed_one(std::string_view input) const {
  std::vector<double> acc(dimension_, 0.0);
  const auto tokens = text::tokenize(input);
  if (tokens.empty()) {
    add_gaussian_direction(acc, text::fnv1a64(input) ^ 0x5bd1e995ULL);
  } else {
    for (const auto& token : tokens) {
      add_gaussian_direction(acc, text::fnv1a64(token));
    }
  }
  std::vector<float> out(acc.begin(), acc.end());
  normalize(out);
  return out;
}

std::vector<std::vector<float>> HashEmbedder::embed(std::span<const std::string> texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    out.push_back(embed_one(t));
  }
  return out;
}

}  // namespace ragsmith::gateway
