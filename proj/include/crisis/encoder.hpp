#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "crisis/rng.hpp"
#include "crisis/tensor.hpp"

namespace crisis {

struct EncoderConfig {
  std::size_t vocab_size = 512;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;

  void validate() const;
};

// Maps text to hashed token ids in [0, vocab_size); empty text yields the
// single reserved id 0. Sequences longer than max_len are truncated with a
// warning.
std::vector<std::uint32_t> encode_tokens(std::string_view text,
                                         std::size_t vocab_size,
                                         std::size_t max_len);

// Trainable sentence encoder: token batches in, fixed-width hidden states
// out, with gradients flowing back through backward() for the most recent
// encode() call.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual std::size_t hidden_dim() const = 0;
  virtual std::vector<std::vector<double>> encode(
      const std::vector<std::vector<std::uint32_t>>& batch) = 0;
  virtual void backward(
      const std::vector<std::vector<double>>& grad_hidden) = 0;
  virtual std::vector<Tensor*> parameters() = 0;
};

// Embedding table + mean pool + tanh dense layer. Stands in for the frozen
// transformer at desk scale while exercising the same head/loss machinery.
class HashedBowEncoder final : public Encoder {
 public:
  HashedBowEncoder(const EncoderConfig& config, Rng init);

  std::size_t hidden_dim() const override { return config_.hidden_dim; }
  std::vector<std::vector<double>> encode(
      const std::vector<std::vector<std::uint32_t>>& batch) override;
  void backward(const std::vector<std::vector<double>>& grad_hidden) override;
  std::vector<Tensor*> parameters() override;

  const EncoderConfig& config() const { return config_; }

 private:
  EncoderConfig config_;
  Tensor embeddings_;  // vocab_size x embed_dim
  Tensor dense_w_;     // hidden_dim x embed_dim
  Tensor dense_b_;     // hidden_dim
  std::vector<std::vector<std::uint32_t>> cached_batch_;
  std::vector<std::vector<double>> cached_pooled_;
  std::vector<std::vector<double>> cached_hidden_;
};

std::unique_ptr<Encoder> make_encoder(const EncoderConfig& config, Rng init);

}  // namespace crisis
