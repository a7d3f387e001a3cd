#include "ragsmith/gateway/gateway_types.hpp"

#include <cmath>

#include "ragsmith/common/text.hpp"

namespace ragsmith::gateway {

void GenerationRequest::validate() const {
  if (text::is_blank(prompt)) {
    throw std::invalid_argument("generation request: empty prompt");
  }
  if (temperature < 0.0) {
    throw std::invalid_argument("generation request: negative temperature");
  }
}

std::string apply_stop_markers(std::string text, std::span<const std::string> stop) {
  auto cut = std::string::npos;
  for (const auto& marker : stop) {
    if (marker.empty()) {
      continue;
    }
    cut = std::min(cut, text.find(marker));
  }
  if (cut != std::string::npos) {
    text.resize(cut);
  }
  return text;
}

void normalize(std::vector<float>& v) {
  double sum = 0.0;
  for (float x : v) {
    sum += static_cast<double>(x) * x;
  }
  if (sum <= 0.0 || !std::isfinite(sum)) {
    throw std::runtime_error("cannot normalize a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(sum);
  for (float& x : v) {
    x = static_cast<float>(x * inv);
  }
}

}  // namespace ragsmith::gateway
