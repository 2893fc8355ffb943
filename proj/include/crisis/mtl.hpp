#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crisis/augment.hpp"
#include "crisis/corpus.hpp"
#include "crisis/encoder.hpp"
#include "crisis/ensemble.hpp"
#include "crisis/rng.hpp"
#include "crisis/taxonomy.hpp"
#include "crisis/tensor.hpp"

namespace crisis {

struct TrainConfig {
  int epochs = 10;
  int batch_size = 16;
  double peak_lr = 5e-5;
  double warmup_fraction = 0.1;
  double dev_fraction = 0.1;
  double w_cls = 1.0;
  double w_reg = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_seq_len = 64;
  EncoderConfig encoder;
  std::optional<NLASchedule> nla;

  void validate() const;
};

// Linear warmup to peak_lr over the first warmup_fraction of total_steps,
// then linear decay to zero at the final step. lr(0) == lr(total) == 0.
double lr_at(std::size_t step, std::size_t total_steps,
             const TrainConfig& config);

struct MultiTaskOutput {
  std::vector<std::vector<double>> logits;  // batch x n_labels
  std::vector<double> priorities;           // batch, sigmoid-squashed
};

struct JointLossResult {
  double total = 0.0;
  double classification = 0.0;  // mean per-label, per-example BCE
  double regression = 0.0;      // mean squared error
};

// total = w_cls * BCE(logits, targets) + w_reg * MSE(priorities, gold).
// BCE is computed from logits in the numerically stable form.
JointLossResult joint_loss(const MultiTaskOutput& output,
                           const std::vector<LabelVector>& targets,
                           const std::vector<double>& gold_priorities,
                           double w_cls, double w_reg);

// Shared encoder with a per-type classification head and a scalar priority
// head trained jointly.
class MultiTaskModel {
 public:
  MultiTaskModel(std::unique_ptr<Encoder> encoder, std::size_t n_labels,
                 Rng init);
  MultiTaskModel(MultiTaskModel&&) = default;
  MultiTaskModel& operator=(MultiTaskModel&&) = default;

  MultiTaskOutput forward(const std::vector<std::vector<std::uint32_t>>& batch);
  // Accumulates gradients of the joint loss for the most recent forward and
  // returns its value.
  JointLossResult backward(const std::vector<LabelVector>& targets,
                           const std::vector<double>& gold_priorities,
                           double w_cls, double w_reg);
  void zero_grads();
  std::vector<Tensor*> parameters();

  std::size_t n_labels() const { return n_labels_; }
  Encoder& encoder() { return *encoder_; }

 private:
  std::unique_ptr<Encoder> encoder_;
  std::size_t n_labels_;
  Tensor cls_w_;  // n_labels x hidden
  Tensor cls_b_;  // n_labels
  Tensor reg_w_;  // hidden
  Tensor reg_b_;  // 1
  std::vector<std::vector<double>> cached_hidden_;
  MultiTaskOutput cached_output_;
};

MultiTaskModel build_model(const TrainConfig& config, std::size_t n_labels);

class AdamOptimizer {
 public:
  explicit AdamOptimizer(std::vector<Tensor*> params, double beta1 = 0.9,
                         double beta2 = 0.999, double epsilon = 1e-8);
  void step(double lr);
  std::size_t steps_taken() const { return t_; }

 private:
  std::vector<Tensor*> params_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  double beta1_, beta2_, epsilon_;
  std::size_t t_ = 0;
};

struct TrainLogEntry {
  int epoch = 0;
  double mean_loss = 0.0;
  double dev_macro_f1 = 0.0;
  double lr_end = 0.0;  // schedule value at the epoch boundary
  int nla_removed = 0;
};

struct Checkpoint {
  std::vector<std::pair<std::string, std::vector<double>>> tensors;
  TrainConfig config;
  std::uint64_t taxonomy_hash = 0;
  int epoch = 0;  // 0 = untrained snapshot
  double dev_macro_f1 = 0.0;
  std::vector<TrainLogEntry> log;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

Checkpoint snapshot(const MultiTaskModel& model, const TrainConfig& config,
                    const Taxonomy& taxonomy);
// Name-matched restore; every model tensor must be present with its size.
void restore_parameters(MultiTaskModel& model, const Checkpoint& checkpoint);
MultiTaskModel model_from_checkpoint(const Checkpoint& checkpoint,
                                     const Taxonomy& taxonomy);

// Joint training over the labeled records plus any alive augmented examples.
// Shuffles per epoch, anneals noisy labels when configured, evaluates dev
// macro-F1 each epoch, and returns the snapshot of the best epoch (ties go
// to the earliest). Aborts with the step index if the loss leaves the reals.
Checkpoint train_multitask(MultiTaskModel& model,
                           const std::vector<TweetRecord>& train,
                           std::vector<AugmentedExample>* augmented,
                           const std::vector<TweetRecord>& dev,
                           const TrainConfig& config, const Taxonomy& taxonomy);

std::vector<Prediction> predict_multitask(MultiTaskModel& model,
                                          const std::vector<TweetRecord>& tweets,
                                          const TrainConfig& config,
                                          const Taxonomy& taxonomy);

}  // namespace crisis
