#include "crisis/mtl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "crisis/error.hpp"
#include "crisis/hash.hpp"
#include "crisis/json_io.hpp"
#include "crisis/log.hpp"
#include "crisis/metrics.hpp"

namespace crisis {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Stable binary cross-entropy from a raw logit.
double bce_from_logit(double logit, double target) {
  return std::max(logit, 0.0) - logit * target +
         std::log1p(std::exp(-std::abs(logit)));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw ValidationError("epochs must be >= 0");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(peak_lr > 0.0)) throw ValidationError("peak_lr must be positive");
  if (!(warmup_fraction >= 0.0) || warmup_fraction >= 1.0) {
    throw ValidationError("warmup_fraction must be in [0, 1)");
  }
  if (!(dev_fraction > 0.0) || !(dev_fraction < 1.0)) {
    throw ValidationError("dev_fraction must be in (0, 1)");
  }
  if (!(w_cls >= 0.0) || !(w_reg >= 0.0)) {
    throw ValidationError("loss weights must be non-negative");
  }
  if (max_seq_len < 1) throw ValidationError("max_seq_len must be >= 1");
  encoder.validate();
  if (nla.has_value()) nla->validate();
}

double lr_at(std::size_t step, std::size_t total_steps,
             const TrainConfig& config) {
  if (total_steps == 0) throw ValidationError("schedule needs >= 1 step");
  if (step > total_steps) {
    throw ValidationError("schedule step " + std::to_string(step) +
                          " beyond total " + std::to_string(total_steps));
  }
  double s = static_cast<double>(step);
  double total = static_cast<double>(total_steps);
  double warmup = config.warmup_fraction * total;
  if (s <= warmup) {
    return warmup > 0.0 ? config.peak_lr * s / warmup : 0.0;
  }
  return config.peak_lr * (total - s) / (total - warmup);
}

JointLossResult joint_loss(const MultiTaskOutput& output,
                           const std::vector<LabelVector>& targets,
                           const std::vector<double>& gold_priorities,
                           double w_cls, double w_reg) {
  std::size_t batch = output.logits.size();
  if (batch == 0) throw ValidationError("joint loss needs a non-empty batch");
  if (targets.size() != batch || gold_priorities.size() != batch ||
      output.priorities.size() != batch) {
    throw ValidationError("joint loss batch sizes disagree");
  }
  std::size_t n_labels = output.logits[0].size();
  JointLossResult result;
  for (std::size_t b = 0; b < batch; ++b) {
    if (output.logits[b].size() != n_labels ||
        targets[b].bits.size() != n_labels) {
      throw ValidationError("joint loss label widths disagree");
    }
    for (std::size_t k = 0; k < n_labels; ++k) {
      double logit = output.logits[b][k];
      if (!std::isfinite(logit) && !std::isinf(logit)) {
        throw RuntimeError("non-finite logit in joint loss");
      }
      double y = targets[b].bits[k] ? 1.0 : 0.0;
      // +inf logit with y=1 (or -inf with y=0) contributes exactly 0.
      if (std::isinf(logit)) {
        result.classification +=
            (logit > 0.0) == (y > 0.5)
                ? 0.0
                : std::numeric_limits<double>::infinity();
      } else {
        result.classification += bce_from_logit(logit, y);
      }
    }
    double p = output.priorities[b];
    double g = gold_priorities[b];
    if (std::isnan(p) || std::isnan(g)) {
      throw RuntimeError("non-finite priority in joint loss");
    }
    result.regression += (p - g) * (p - g);
  }
  result.classification /= static_cast<double>(batch * n_labels);
  result.regression /= static_cast<double>(batch);
  result.total = w_cls * result.classification + w_reg * result.regression;
  return result;
}

MultiTaskModel::MultiTaskModel(std::unique_ptr<Encoder> encoder,
                               std::size_t n_labels, Rng init)
    : encoder_(std::move(encoder)),
      n_labels_(n_labels),
      cls_w_("head.cls_w", n_labels, encoder_->hidden_dim()),
      cls_b_("head.cls_b", n_labels, 1),
      reg_w_("head.reg_w", encoder_->hidden_dim(), 1),
      reg_b_("head.reg_b", 1, 1) {
  if (n_labels_ < 1) throw ValidationError("model needs >= 1 label");
  double scale = 1.0 / std::sqrt(static_cast<double>(encoder_->hidden_dim()));
  Rng cls_rng = init.substream("cls");
  for (auto& v : cls_w_.value) v = scale * cls_rng.normal();
  Rng reg_rng = init.substream("reg");
  for (auto& v : reg_w_.value) v = scale * reg_rng.normal();
}

MultiTaskOutput MultiTaskModel::forward(
    const std::vector<std::vector<std::uint32_t>>& batch) {
  if (batch.empty()) throw ValidationError("forward needs a non-empty batch");
  cached_hidden_ = encoder_->encode(batch);
  std::size_t hidden_dim = encoder_->hidden_dim();
  MultiTaskOutput out;
  out.logits.assign(batch.size(), std::vector<double>(n_labels_, 0.0));
  out.priorities.assign(batch.size(), 0.0);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& hidden = cached_hidden_[b];
    for (std::size_t k = 0; k < n_labels_; ++k) {
      double acc = cls_b_.value[k];
      for (std::size_t h = 0; h < hidden_dim; ++h) {
        acc += cls_w_.at(k, h) * hidden[h];
      }
      out.logits[b][k] = acc;
    }
    double z = reg_b_.value[0];
    for (std::size_t h = 0; h < hidden_dim; ++h) {
      z += reg_w_.value[h] * hidden[h];
    }
    out.priorities[b] = sigmoid(z);
  }
  cached_output_ = out;
  return out;
}

JointLossResult MultiTaskModel::backward(
    const std::vector<LabelVector>& targets,
    const std::vector<double>& gold_priorities, double w_cls, double w_reg) {
  std::size_t batch = cached_output_.logits.size();
  if (batch == 0) throw ValidationError("backward without a cached forward");
  JointLossResult loss =
      joint_loss(cached_output_, targets, gold_priorities, w_cls, w_reg);

  std::size_t hidden_dim = encoder_->hidden_dim();
  double cls_scale = w_cls / static_cast<double>(batch * n_labels_);
  double reg_scale = w_reg * 2.0 / static_cast<double>(batch);
  std::vector<std::vector<double>> grad_hidden(
      batch, std::vector<double>(hidden_dim, 0.0));
  for (std::size_t b = 0; b < batch; ++b) {
    const auto& hidden = cached_hidden_[b];
    for (std::size_t k = 0; k < n_labels_; ++k) {
      double y = targets[b].bits[k] ? 1.0 : 0.0;
      double g = cls_scale * (sigmoid(cached_output_.logits[b][k]) - y);
      cls_b_.grad[k] += g;
      for (std::size_t h = 0; h < hidden_dim; ++h) {
        cls_w_.gat(k, h) += g * hidden[h];
        grad_hidden[b][h] += g * cls_w_.at(k, h);
      }
    }
    double p = cached_output_.priorities[b];
    double gz = reg_scale * (p - gold_priorities[b]) * p * (1.0 - p);
    reg_b_.grad[0] += gz;
    for (std::size_t h = 0; h < hidden_dim; ++h) {
      reg_w_.grad[h] += gz * hidden[h];
      grad_hidden[b][h] += gz * reg_w_.value[h];
    }
  }
  encoder_->backward(grad_hidden);
  return loss;
}

void MultiTaskModel::zero_grads() {
  for (Tensor* t : parameters()) t->zero_grad();
}

std::vector<Tensor*> MultiTaskModel::parameters() {
  std::vector<Tensor*> params = encoder_->parameters();
  params.push_back(&cls_w_);
  params.push_back(&cls_b_);
  params.push_back(&reg_w_);
  params.push_back(&reg_b_);
  return params;
}

MultiTaskModel build_model(const TrainConfig& config, std::size_t n_labels) {
  config.validate();
  Rng init = Rng(config.seed).substream("init");
  return MultiTaskModel(make_encoder(config.encoder, init.substream("encoder")),
                        n_labels, init.substream("heads"));
}

AdamOptimizer::AdamOptimizer(std::vector<Tensor*> params, double beta1,
                             double beta2, double epsilon)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2),
      epsilon_(epsilon) {
  if (params_.empty()) throw ValidationError("optimizer has no parameters");
  for (const Tensor* t : params_) {
    m_.emplace_back(t->size(), 0.0);
    v_.emplace_back(t->size(), 0.0);
  }
}

void AdamOptimizer::step(double lr) {
  ++t_;
  double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); ++p) {
    Tensor& tensor = *params_[p];
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      double g = tensor.grad[i];
      m_[p][i] = beta1_ * m_[p][i] + (1.0 - beta1_) * g;
      v_[p][i] = beta2_ * v_[p][i] + (1.0 - beta2_) * g * g;
      double mhat = m_[p][i] / bc1;
      double vhat = v_[p][i] / bc2;
      tensor.value[i] -= lr * mhat / (std::sqrt(vhat) + epsilon_);
    }
  }
}

Checkpoint snapshot(const MultiTaskModel& model, const TrainConfig& config,
                    const Taxonomy& taxonomy) {
  Checkpoint ckpt;
  auto& mutable_model = const_cast<MultiTaskModel&>(model);
  for (const Tensor* t : mutable_model.parameters()) {
    ckpt.tensors.emplace_back(t->name, t->value);
  }
  ckpt.config = config;
  ckpt.taxonomy_hash = taxonomy.hash();
  return ckpt;
}

void restore_parameters(MultiTaskModel& model, const Checkpoint& checkpoint) {
  for (Tensor* t : model.parameters()) {
    auto it = std::find_if(checkpoint.tensors.begin(), checkpoint.tensors.end(),
                           [&](const auto& kv) { return kv.first == t->name; });
    if (it == checkpoint.tensors.end()) {
      throw ValidationError("checkpoint is missing tensor '" + t->name + "'");
    }
    if (it->second.size() != t->size()) {
      throw ValidationError("checkpoint tensor '" + t->name + "' has " +
                            std::to_string(it->second.size()) +
                            " values, expected " + std::to_string(t->size()));
    }
    t->value = it->second;
  }
}

MultiTaskModel model_from_checkpoint(const Checkpoint& checkpoint,
                                     const Taxonomy& taxonomy) {
  if (checkpoint.taxonomy_hash != taxonomy.hash()) {
    throw ValidationError("checkpoint was trained against a different "
                          "taxonomy");
  }
  MultiTaskModel model = build_model(checkpoint.config, taxonomy.size());
  restore_parameters(model, checkpoint);
  return model;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write checkpoint '" + path + "'");
  out << "crisis-ckpt 1\n";
  out << "taxonomy fnv1a:" << hex64(checkpoint.taxonomy_hash) << "\n";
  nlohmann::json cfg = checkpoint.config;
  out << "config " << cfg.dump() << "\n";
  out << "epoch " << checkpoint.epoch << "\n";
  out << "dev_macro_f1 " << format_double(checkpoint.dev_macro_f1) << "\n";
  out << "tensors " << checkpoint.tensors.size() << "\n";
  for (const auto& [name, values] : checkpoint.tensors) {
    out << "tensor " << name << " " << values.size() << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << (i ? " " : "") << format_double(values[i]);
    }
    out << "\n";
  }
  out << "log " << checkpoint.log.size() << "\n";
  for (const auto& entry : checkpoint.log) {
    nlohmann::json j = entry;
    out << j.dump() << "\n";
  }
  if (!out) throw RuntimeError("cannot write checkpoint '" + path + "'");
}

namespace {

std::string expect_line(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("checkpoint '" + path + "' is truncated");
  }
  return line;
}

std::string expect_prefixed(std::istream& in, const std::string& path,
                            const std::string& prefix) {
  std::string line = expect_line(in, path);
  if (line.rfind(prefix, 0) != 0) {
    throw ValidationError("checkpoint '" + path + "': expected '" + prefix +
                          "...' line");
  }
  return line.substr(prefix.size());
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint '" + path + "'");
  if (expect_line(in, path) != "crisis-ckpt 1") {
    throw ValidationError("'" + path + "' is not a crisis-ckpt 1 file");
  }
  Checkpoint ckpt;
  std::string line = expect_line(in, path);
  if (line.rfind("taxonomy fnv1a:", 0) != 0) {
    throw ValidationError("checkpoint '" + path + "': bad taxonomy line");
  }
  ckpt.taxonomy_hash = std::stoull(line.substr(15), nullptr, 16);
  line = expect_line(in, path);
  if (line.rfind("config ", 0) != 0) {
    throw ValidationError("checkpoint '" + path + "': bad config line");
  }
  try {
    ckpt.config = nlohmann::json::parse(line.substr(7)).get<TrainConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("checkpoint '" + path +
                          "': bad config: " + std::string(e.what()));
  }
  std::istringstream(expect_prefixed(in, path, "epoch ")) >> ckpt.epoch;
  std::istringstream(expect_prefixed(in, path, "dev_macro_f1 ")) >>
      ckpt.dev_macro_f1;
  std::size_t n_tensors = 0;
  std::istringstream(expect_prefixed(in, path, "tensors ")) >> n_tensors;
  for (std::size_t t = 0; t < n_tensors; ++t) {
    std::istringstream header(expect_line(in, path));
    std::string tag, name;
    std::size_t count = 0;
    header >> tag >> name >> count;
    if (tag != "tensor" || name.empty()) {
      throw ValidationError("checkpoint '" + path + "': bad tensor header");
    }
    std::istringstream values(expect_line(in, path));
    std::vector<double> data(count);
    for (auto& v : data) {
      if (!(values >> v)) {
        throw ValidationError("checkpoint '" + path + "': tensor '" + name +
                              "' is short");
      }
    }
    ckpt.tensors.emplace_back(name, std::move(data));
  }
  std::size_t n_log = 0;
  std::istringstream(expect_prefixed(in, path, "log ")) >> n_log;
  for (std::size_t i = 0; i < n_log; ++i) {
    try {
      ckpt.log.push_back(
          nlohmann::json::parse(expect_line(in, path)).get<TrainLogEntry>());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("checkpoint '" + path +
                            "': bad log entry: " + std::string(e.what()));
    }
  }
  return ckpt;
}

namespace {

struct EncodedExample {
  std::vector<std::uint32_t> tokens;
  LabelVector labels;
  double priority = 0.0;
  std::ptrdiff_t augmented_index = -1;  // -1 = original record
};

EncodedExample encode_example(const TweetRecord& record,
                              const TrainConfig& config,
                              const Taxonomy& taxonomy) {
  if (!record.gold_its.has_value() || !record.gold_priority.has_value()) {
    throw ValidationError("training tweet '" + record.tweet_id +
                          "' lacks gold labels");
  }
  EncodedExample ex;
  ex.tokens = encode_tokens(record.text, config.encoder.vocab_size,
                            config.max_seq_len);
  ex.labels = binarize(*record.gold_its, taxonomy);
  ex.priority = *record.gold_priority;
  return ex;
}

LabelVector decode_prediction(const std::vector<double>& probs) {
  LabelVector out;
  out.bits.assign(probs.size(), 0);
  bool any = false;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] >= 0.5) {
      out.bits[k] = 1;
      any = true;
    }
  }
  if (!any) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < probs.size(); ++k) {
      if (probs[k] > probs[best]) best = k;
    }
    out.bits[best] = 1;
  }
  return out;
}

// Forward in inference-sized chunks; returns per-row sigmoid probabilities
// and priorities.
void batched_inference(MultiTaskModel& model,
                       const std::vector<std::vector<std::uint32_t>>& tokens,
                       std::size_t batch_size,
                       std::vector<std::vector<double>>& probs,
                       std::vector<double>& priorities) {
  probs.clear();
  priorities.clear();
  for (std::size_t start = 0; start < tokens.size(); start += batch_size) {
    std::size_t stop = std::min(tokens.size(), start + batch_size);
    std::vector<std::vector<std::uint32_t>> chunk(tokens.begin() + start,
                                                  tokens.begin() + stop);
    MultiTaskOutput out = model.forward(chunk);
    for (std::size_t b = 0; b < chunk.size(); ++b) {
      std::vector<double> row(out.logits[b].size());
      for (std::size_t k = 0; k < row.size(); ++k) {
        row[k] = sigmoid(out.logits[b][k]);
      }
      probs.push_back(std::move(row));
      priorities.push_back(out.priorities[b]);
    }
  }
}

double dev_macro_f1(MultiTaskModel& model,
                    const std::vector<std::set<std::string>>& gold,
                    const std::vector<std::vector<std::uint32_t>>& tokens,
                    const TrainConfig& config, const Taxonomy& taxonomy) {
  std::vector<std::vector<double>> probs;
  std::vector<double> priorities;
  batched_inference(model, tokens, static_cast<std::size_t>(config.batch_size),
                    probs, priorities);
  std::vector<std::set<std::string>> pred;
  pred.reserve(probs.size());
  for (const auto& row : probs) {
    pred.push_back(unbinarize(decode_prediction(row), taxonomy));
  }
  return it_f1(gold, pred, taxonomy, Subset::All);
}

}  // namespace

Checkpoint train_multitask(MultiTaskModel& model,
                           const std::vector<TweetRecord>& train,
                           std::vector<AugmentedExample>* augmented,
                           const std::vector<TweetRecord>& dev,
                           const TrainConfig& config,
                           const Taxonomy& taxonomy) {
  config.validate();
  if (train.empty()) throw ValidationError("training set is empty");
  if (dev.empty()) throw ValidationError("dev set is empty");
  if (model.n_labels() != taxonomy.size()) {
    throw ValidationError("model has " + std::to_string(model.n_labels()) +
                          " labels, taxonomy has " +
                          std::to_string(taxonomy.size()));
  }

  std::vector<EncodedExample> examples;
  examples.reserve(train.size() +
                   (augmented != nullptr ? augmented->size() : 0));
  for (const auto& record : train) {
    examples.push_back(encode_example(record, config, taxonomy));
  }
  if (augmented != nullptr) {
    for (std::size_t i = 0; i < augmented->size(); ++i) {
      EncodedExample ex = encode_example((*augmented)[i].record, config,
                                         taxonomy);
      ex.augmented_index = static_cast<std::ptrdiff_t>(i);
      examples.push_back(std::move(ex));
    }
  }

  std::vector<std::vector<std::uint32_t>> dev_tokens;
  std::vector<std::set<std::string>> dev_gold;
  for (const auto& record : dev) {
    if (!record.gold_its.has_value()) {
      throw ValidationError("dev tweet '" + record.tweet_id +
                            "' lacks gold labels");
    }
    dev_tokens.push_back(encode_tokens(record.text, config.encoder.vocab_size,
                                       config.max_seq_len));
    binarize(*record.gold_its, taxonomy);  // validates the type names
    dev_gold.push_back(*record.gold_its);
  }

  std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
  std::size_t initial_alive = 0;
  for (const auto& ex : examples) {
    if (ex.augmented_index < 0 || (*augmented)[ex.augmented_index].alive) {
      ++initial_alive;
    }
  }
  std::size_t steps_per_epoch = (initial_alive + batch_size - 1) / batch_size;
  std::size_t planned_steps =
      static_cast<std::size_t>(std::max(config.epochs, 0)) * steps_per_epoch;

  if (config.epochs == 0) {
    Checkpoint ckpt = snapshot(model, config, taxonomy);
    ckpt.dev_macro_f1 = dev_macro_f1(model, dev_gold, dev_tokens, config,
                                     taxonomy);
    return ckpt;
  }

  Rng root(config.seed);
  AdamOptimizer optimizer(model.parameters());
  Checkpoint best;
  double best_f1 = -1.0;
  std::vector<TrainLogEntry> log;
  std::size_t global_step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      std::ptrdiff_t ai = examples[i].augmented_index;
      if (ai < 0 || (*augmented)[ai].alive) order.push_back(i);
    }
    Rng shuffle_rng =
        root.substream("shuffle.epoch." + std::to_string(epoch));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      std::size_t stop = std::min(order.size(), start + batch_size);
      std::vector<std::vector<std::uint32_t>> tokens;
      std::vector<LabelVector> targets;
      std::vector<double> gold;
      for (std::size_t i = start; i < stop; ++i) {
        const auto& ex = examples[order[i]];
        tokens.push_back(ex.tokens);
        targets.push_back(ex.labels);
        gold.push_back(ex.priority);
      }
      model.forward(tokens);
      model.zero_grads();
      JointLossResult loss =
          model.backward(targets, gold, config.w_cls, config.w_reg);
      ++global_step;
      if (!std::isfinite(loss.total)) {
        throw RuntimeError("training diverged at step " +
                           std::to_string(global_step) +
                           ": non-finite loss");
      }
      optimizer.step(lr_at(global_step, planned_steps, config));
      loss_sum += loss.total * static_cast<double>(tokens.size());
      seen += tokens.size();
    }

    TrainLogEntry entry;
    entry.epoch = epoch;
    entry.mean_loss = seen > 0 ? loss_sum / static_cast<double>(seen) : 0.0;
    entry.dev_macro_f1 =
        dev_macro_f1(model, dev_gold, dev_tokens, config, taxonomy);
    entry.lr_end = lr_at(global_step, planned_steps, config);

    if (config.nla.has_value() && augmented != nullptr &&
        !augmented->empty()) {
      std::vector<std::vector<std::uint32_t>> aug_tokens;
      for (const auto& ex : examples) {
        if (ex.augmented_index >= 0) aug_tokens.push_back(ex.tokens);
      }
      std::vector<std::vector<double>> aug_probs;
      std::vector<double> aug_priorities;
      batched_inference(model, aug_tokens, batch_size, aug_probs,
                        aug_priorities);
      NLASchedule schedule = *config.nla;
      if (schedule.epochs == 0) schedule.epochs = config.epochs;
      entry.nla_removed =
          nla_filter(*augmented, aug_probs, epoch, schedule, taxonomy);
      if (entry.nla_removed > 0) {
        logging::info("epoch " + std::to_string(epoch) + ": annealed away " +
                      std::to_string(entry.nla_removed) +
                      " augmented examples");
      }
    }

    log.push_back(entry);
    if (entry.dev_macro_f1 > best_f1) {
      best_f1 = entry.dev_macro_f1;
      best = snapshot(model, config, taxonomy);
      best.epoch = epoch;
      best.dev_macro_f1 = entry.dev_macro_f1;
    }
  }

  best.log = std::move(log);
  return best;
}

std::vector<Prediction> predict_multitask(MultiTaskModel& model,
                                          const std::vector<TweetRecord>& tweets,
                                          const TrainConfig& config,
                                          const Taxonomy& taxonomy) {
  if (model.n_labels() != taxonomy.size()) {
    throw ValidationError("model has " + std::to_string(model.n_labels()) +
                          " labels, taxonomy has " +
                          std::to_string(taxonomy.size()));
  }
  std::vector<Prediction> out;
  if (tweets.empty()) return out;
  std::vector<std::vector<std::uint32_t>> tokens;
  tokens.reserve(tweets.size());
  for (const auto& record : tweets) {
    tokens.push_back(encode_tokens(record.text, config.encoder.vocab_size,
                                   config.max_seq_len));
  }
  std::vector<std::vector<double>> probs;
  std::vector<double> priorities;
  batched_inference(model, tokens, static_cast<std::size_t>(config.batch_size),
                    probs, priorities);
  out.reserve(tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    Prediction pred;
    pred.tweet_id = tweets[i].tweet_id;
    pred.event_id = tweets[i].event_id;
    pred.probs = probs[i];
    pred.its = unbinarize(decode_prediction(probs[i]), taxonomy);
    pred.priority = priorities[i];
    out.push_back(std::move(pred));
  }
  return out;
}

}  // namespace crisis
