#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace crisis {

// Sentence-embedding adapter. Implementations must always return exactly
// `dimension()` values and be deterministic for a fixed input.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const std::string& name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Deterministic stand-in for pretrained sentence encoders: each token hashes
// to a fixed pseudo-random vector and the text embedding is the token mean.
// Runs with no downloads; real checkpoints plug in behind the same interface.
class HashEmbeddingProvider final : public EmbeddingProvider {
 public:
  HashEmbeddingProvider(std::string name, std::size_t dimension,
                        std::uint64_t seed);

  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(const std::string& text) const override;

  std::uint64_t seed() const { return seed_; }

 private:
  std::string name_;
  std::size_t dimension_;
  std::uint64_t seed_;
};

// Concatenation of provider outputs in the given order; segment i comes from
// provider i. Provider failures are reported with the provider name.
std::vector<double> embed_concat(
    const std::string& text,
    const std::vector<const EmbeddingProvider*>& providers);

}  // namespace crisis
