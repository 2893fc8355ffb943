#include "crisis/encoder.hpp"

#include <cmath>

#include "crisis/error.hpp"
#include "crisis/hash.hpp"
#include "crisis/log.hpp"
#include "crisis/text.hpp"

namespace crisis {

void EncoderConfig::validate() const {
  if (vocab_size < 2) throw ValidationError("encoder vocab_size must be >= 2");
  if (embed_dim < 1) throw ValidationError("encoder embed_dim must be >= 1");
  if (hidden_dim < 1) throw ValidationError("encoder hidden_dim must be >= 1");
}

std::vector<std::uint32_t> encode_tokens(std::string_view text,
                                         std::size_t vocab_size,
                                         std::size_t max_len) {
  if (vocab_size < 2) throw ValidationError("encoder vocab_size must be >= 2");
  if (max_len < 1) throw ValidationError("max sequence length must be >= 1");
  std::vector<std::string> tokens = tokenize_words(text);
  if (tokens.empty()) return {0};
  if (tokens.size() > max_len) {
    logging::warn("truncating a " + std::to_string(tokens.size()) +
                  "-token tweet to " + std::to_string(max_len) + " tokens");
    tokens.resize(max_len);
  }
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) {
    // Id 0 is reserved for empty text.
    ids.push_back(static_cast<std::uint32_t>(
        1 + fnv1a64(token) % (vocab_size - 1)));
  }
  return ids;
}

HashedBowEncoder::HashedBowEncoder(const EncoderConfig& config, Rng init)
    : config_(config),
      embeddings_("encoder.embeddings", config.vocab_size, config.embed_dim),
      dense_w_("encoder.dense_w", config.hidden_dim, config.embed_dim),
      dense_b_("encoder.dense_b", config.hidden_dim, 1) {
  config_.validate();
  Rng emb_rng = init.substream("embeddings");
  for (auto& v : embeddings_.value) v = 0.5 * emb_rng.normal();
  Rng dense_rng = init.substream("dense");
  double scale = 1.0 / std::sqrt(static_cast<double>(config_.embed_dim));
  for (auto& v : dense_w_.value) v = scale * dense_rng.normal();
}

std::vector<std::vector<double>> HashedBowEncoder::encode(
    const std::vector<std::vector<std::uint32_t>>& batch) {
  cached_batch_ = batch;
  cached_pooled_.assign(batch.size(),
                        std::vector<double>(config_.embed_dim, 0.0));
  cached_hidden_.assign(batch.size(),
                        std::vector<double>(config_.hidden_dim, 0.0));
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch[b].empty()) {
      throw ValidationError("encoder received an empty token sequence");
    }
    auto& pooled = cached_pooled_[b];
    for (std::uint32_t id : batch[b]) {
      if (id >= config_.vocab_size) {
        throw ValidationError("token id " + std::to_string(id) +
                              " out of range for vocab " +
                              std::to_string(config_.vocab_size));
      }
      for (std::size_t e = 0; e < config_.embed_dim; ++e) {
        pooled[e] += embeddings_.at(id, e);
      }
    }
    double inv = 1.0 / static_cast<double>(batch[b].size());
    for (auto& v : pooled) v *= inv;
    for (std::size_t h = 0; h < config_.hidden_dim; ++h) {
      double pre = dense_b_.value[h];
      for (std::size_t e = 0; e < config_.embed_dim; ++e) {
        pre += dense_w_.at(h, e) * pooled[e];
      }
      cached_hidden_[b][h] = std::tanh(pre);
    }
  }
  return cached_hidden_;
}

void HashedBowEncoder::backward(
    const std::vector<std::vector<double>>& grad_hidden) {
  if (grad_hidden.size() != cached_batch_.size()) {
    throw ValidationError("encoder backward batch (" +
                          std::to_string(grad_hidden.size()) +
                          ") does not match the cached forward batch (" +
                          std::to_string(cached_batch_.size()) + ")");
  }
  std::vector<double> grad_pooled(config_.embed_dim);
  for (std::size_t b = 0; b < grad_hidden.size(); ++b) {
    std::fill(grad_pooled.begin(), grad_pooled.end(), 0.0);
    for (std::size_t h = 0; h < config_.hidden_dim; ++h) {
      double hidden = cached_hidden_[b][h];
      double gpre = grad_hidden[b][h] * (1.0 - hidden * hidden);
      dense_b_.grad[h] += gpre;
      for (std::size_t e = 0; e < config_.embed_dim; ++e) {
        dense_w_.gat(h, e) += gpre * cached_pooled_[b][e];
        grad_pooled[e] += gpre * dense_w_.at(h, e);
      }
    }
    double inv = 1.0 / static_cast<double>(cached_batch_[b].size());
    for (std::uint32_t id : cached_batch_[b]) {
      for (std::size_t e = 0; e < config_.embed_dim; ++e) {
        embeddings_.gat(id, e) += grad_pooled[e] * inv;
      }
    }
  }
}

std::vector<Tensor*> HashedBowEncoder::parameters() {
  return {&embeddings_, &dense_w_, &dense_b_};
}

std::unique_ptr<Encoder> make_encoder(const EncoderConfig& config, Rng init) {
  return std::make_unique<HashedBowEncoder>(config, init);
}

}  // namespace crisis
