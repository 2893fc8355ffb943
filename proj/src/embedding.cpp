#include "crisis/embedding.hpp"

#include "crisis/error.hpp"
#include "crisis/rng.hpp"
#include "crisis/text.hpp"

namespace crisis {

HashEmbeddingProvider::HashEmbeddingProvider(std::string name,
                                             std::size_t dimension,
                                             std::uint64_t seed)
    : name_(std::move(name)), dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) {
    throw ValidationError("embedding provider '" + name_ +
                          "' must have a positive dimension");
  }
}

std::vector<double> HashEmbeddingProvider::embed(
    const std::string& text) const {
  std::vector<double> out(dimension_, 0.0);
  const auto tokens = tokenize_words(text);
  for (const auto& token : tokens) {
    Rng token_rng(mix64(seed_, fnv1a64(token)));
    for (std::size_t d = 0; d < dimension_; ++d) {
      out[d] += token_rng.normal();
    }
  }
  if (!tokens.empty()) {
    for (double& v : out) v /= static_cast<double>(tokens.size());
  }
  return out;
}

std::vector<double> embed_concat(
    const std::string& text,
    const std::vector<const EmbeddingProvider*>& providers) {
  if (providers.empty()) {
    throw ValidationError("embed_concat requires at least one provider");
  }
  std::vector<double> out;
  for (const EmbeddingProvider* provider : providers) {
    std::vector<double> segment;
    try {
      segment = provider->embed(text);
    } catch (const std::exception& e) {
      throw RuntimeError("embedding provider '" + provider->name() +
                         "' failed: " + e.what());
    }
    if (segment.size() != provider->dimension()) {
      throw RuntimeError("embedding provider '" + provider->name() +
                         "' returned " + std::to_string(segment.size()) +
                         " values, expected " +
                         std::to_string(provider->dimension()));
    }
    out.insert(out.end(), segment.begin(), segment.end());
  }
  return out;
}

}  // namespace crisis
