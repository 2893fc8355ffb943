#include "crisis/json_io.hpp"

#include "crisis/error.hpp"

namespace crisis {

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      it->get_to(out);
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(std::string("config field '") + key +
                            "' has the wrong type");
    }
  }
}

}  // namespace

void to_json(nlohmann::json& j, const EncoderConfig& config) {
  j = {{"vocab_size", config.vocab_size},
       {"embed_dim", config.embed_dim},
       {"hidden_dim", config.hidden_dim}};
}

void from_json(const nlohmann::json& j, EncoderConfig& config) {
  read_field(j, "vocab_size", config.vocab_size);
  read_field(j, "embed_dim", config.embed_dim);
  read_field(j, "hidden_dim", config.hidden_dim);
}

void to_json(nlohmann::json& j, const NLASchedule& schedule) {
  j = {{"tau_start", schedule.tau_start},
       {"tau_end", schedule.tau_end},
       {"epochs", schedule.epochs}};
}

void from_json(const nlohmann::json& j, NLASchedule& schedule) {
  read_field(j, "tau_start", schedule.tau_start);
  read_field(j, "tau_end", schedule.tau_end);
  read_field(j, "epochs", schedule.epochs);
}

void to_json(nlohmann::json& j, const TrainConfig& config) {
  j = {{"epochs", config.epochs},
       {"batch_size", config.batch_size},
       {"peak_lr", config.peak_lr},
       {"warmup_fraction", config.warmup_fraction},
       {"dev_fraction", config.dev_fraction},
       {"w_cls", config.w_cls},
       {"w_reg", config.w_reg},
       {"seed", config.seed},
       {"max_seq_len", config.max_seq_len},
       {"encoder", config.encoder}};
  if (config.nla.has_value()) j["nla"] = *config.nla;
}

void from_json(const nlohmann::json& j, TrainConfig& config) {
  read_field(j, "epochs", config.epochs);
  read_field(j, "batch_size", config.batch_size);
  read_field(j, "peak_lr", config.peak_lr);
  read_field(j, "warmup_fraction", config.warmup_fraction);
  read_field(j, "dev_fraction", config.dev_fraction);
  read_field(j, "w_cls", config.w_cls);
  read_field(j, "w_reg", config.w_reg);
  read_field(j, "seed", config.seed);
  read_field(j, "max_seq_len", config.max_seq_len);
  read_field(j, "encoder", config.encoder);
  if (auto it = j.find("nla"); it != j.end() && !it->is_null()) {
    NLASchedule schedule;
    from_json(*it, schedule);
    config.nla = schedule;
  }
}

void to_json(nlohmann::json& j, const TrainLogEntry& entry) {
  j = {{"epoch", entry.epoch},
       {"mean_loss", entry.mean_loss},
       {"dev_macro_f1", entry.dev_macro_f1},
       {"lr_end", entry.lr_end},
       {"nla_removed", entry.nla_removed}};
}

void from_json(const nlohmann::json& j, TrainLogEntry& entry) {
  read_field(j, "epoch", entry.epoch);
  read_field(j, "mean_loss", entry.mean_loss);
  read_field(j, "dev_macro_f1", entry.dev_macro_f1);
  read_field(j, "lr_end", entry.lr_end);
  read_field(j, "nla_removed", entry.nla_removed);
}

}  // namespace crisis
