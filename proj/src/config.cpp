#include "crisis/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "crisis/error.hpp"
#include "crisis/hash.hpp"
#include "crisis/json_io.hpp"

namespace crisis {

namespace {

const std::vector<std::pair<std::string, PipelineKind>> kPipelineNames = {
    {"baseline", PipelineKind::Baseline},
    {"mtl", PipelineKind::Mtl},
    {"mtl+eda", PipelineKind::MtlEda},
    {"mtl+dga", PipelineKind::MtlDga},
    {"mtl+dga+nla", PipelineKind::MtlDgaNla},
    {"ensemble", PipelineKind::Ensemble},
    {"ensemble+post", PipelineKind::EnsemblePost},
};

void check_keys(const nlohmann::json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ValidationError(where + ": unknown key '" + key + "'");
    }
  }
}

std::string resolve(const std::filesystem::path& base,
                    const std::string& value) {
  if (value.empty()) return value;
  std::filesystem::path p(value);
  return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

bool is_safe_run_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-' || c == '+';
  });
}

}  // namespace

PipelineKind pipeline_kind_from_string(const std::string& name) {
  for (const auto& [text, kind] : kPipelineNames) {
    if (text == name) return kind;
  }
  std::string known;
  for (const auto& [text, kind] : kPipelineNames) {
    known += (known.empty() ? "" : ", ") + text;
  }
  throw ValidationError("unknown pipeline '" + name + "' (known: " + known +
                        ")");
}

std::string to_string(PipelineKind kind) {
  for (const auto& [text, k] : kPipelineNames) {
    if (k == kind) return text;
  }
  return "?";
}

void RunConfig::validate() const {
  if (!is_safe_run_name(run_name)) {
    throw ValidationError("run_name '" + run_name +
                          "' must be non-empty and use only [A-Za-z0-9._+-]");
  }
  if (taxonomy_path.empty()) throw ValidationError("config needs 'taxonomy'");
  if (output_root.empty()) throw ValidationError("config needs 'output_root'");
  for (const std::string* path :
       {&taxonomy_path, &train_path, &test_path, &augment.lexicon_path,
        &augment.responses_path}) {
    if (!path->empty() && !std::filesystem::exists(*path)) {
      throw ValidationError("config references a missing path: '" + *path +
                            "'");
    }
  }
  bool is_ensemble = pipeline == PipelineKind::Ensemble ||
                     pipeline == PipelineKind::EnsemblePost;
  if (is_ensemble) {
    if (members.empty()) {
      throw ValidationError("ensemble config needs at least one member run");
    }
    for (const auto& member : members) {
      if (!is_safe_run_name(member)) {
        throw ValidationError("member run name '" + member + "' is invalid");
      }
    }
  } else {
    if (train_path.empty()) throw ValidationError("config needs 'train_corpus'");
    if (test_path.empty()) throw ValidationError("config needs 'test_corpus'");
  }
  if (pipeline != PipelineKind::Baseline && !is_ensemble) {
    train.validate();
  }
  if (pipeline == PipelineKind::Baseline) {
    if (baseline.embedding_dim < 1) {
      throw ValidationError("embedding_dim must be >= 1");
    }
  }
  if (pipeline == PipelineKind::MtlEda) {
    if (augment.balance_target < 1) {
      throw ValidationError("EDA runs need balance_target >= 1");
    }
    if (augment.lexicon_path.empty()) {
      throw ValidationError("EDA runs need 'lexicon'");
    }
  }
  if (pipeline == PipelineKind::MtlDga || pipeline == PipelineKind::MtlDgaNla) {
    if (augment.balance_target < 1) {
      throw ValidationError("DGA runs need balance_target >= 1");
    }
    if (augment.responses_path.empty()) {
      throw ValidationError("DGA runs need 'responses'");
    }
  }
  if (pipeline == PipelineKind::MtlDgaNla && !train.nla.has_value()) {
    throw ValidationError("NLA runs need a 'training.nla' schedule");
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config '" + path + "': " + std::string(e.what()));
  }
  if (!doc.is_object()) {
    throw ValidationError("config '" + path + "' must be a JSON object");
  }
  std::string where = "config '" + path + "'";
  check_keys(doc, where,
             {"run_name", "pipeline", "taxonomy", "train_corpus",
              "test_corpus", "output_root", "training", "baseline", "augment",
              "members", "irrelevant_comparison"});

  auto get_string = [&](const char* key, std::string& out, bool required) {
    auto it = doc.find(key);
    if (it == doc.end()) {
      if (required) throw ValidationError(where + ": missing '" + key + "'");
      return;
    }
    if (!it->is_string()) {
      throw ValidationError(where + ": '" + key + "' must be a string");
    }
    out = it->get<std::string>();
  };

  RunConfig config;
  get_string("run_name", config.run_name, true);
  std::string pipeline;
  get_string("pipeline", pipeline, true);
  config.pipeline = pipeline_kind_from_string(pipeline);

  std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::string raw;
  get_string("taxonomy", raw, true);
  config.taxonomy_path = resolve(base, raw);
  raw.clear();
  get_string("train_corpus", raw, false);
  config.train_path = resolve(base, raw);
  raw.clear();
  get_string("test_corpus", raw, false);
  config.test_path = resolve(base, raw);
  raw.clear();
  get_string("output_root", raw, false);
  config.output_root = resolve(base, raw);

  if (auto it = doc.find("training"); it != doc.end()) {
    try {
      config.train = it->get<TrainConfig>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + ": bad 'training': " +
                            std::string(e.what()));
    }
  }
  if (auto it = doc.find("baseline"); it != doc.end()) {
    check_keys(*it, where + " baseline", {"embedding_dim", "embedding_seed"});
    if (it->contains("embedding_dim")) {
      config.baseline.embedding_dim = (*it)["embedding_dim"].get<std::size_t>();
    }
    if (it->contains("embedding_seed")) {
      config.baseline.embedding_seed =
          (*it)["embedding_seed"].get<std::uint64_t>();
    }
  }
  if (auto it = doc.find("augment"); it != doc.end()) {
    check_keys(*it, where + " augment",
               {"balance_target", "eda_alpha", "lexicon", "responses"});
    if (it->contains("balance_target")) {
      config.augment.balance_target = (*it)["balance_target"].get<int>();
    }
    if (it->contains("eda_alpha")) {
      config.augment.eda.alpha = (*it)["eda_alpha"].get<double>();
    }
    if (it->contains("lexicon")) {
      config.augment.lexicon_path =
          resolve(base, (*it)["lexicon"].get<std::string>());
    }
    if (it->contains("responses")) {
      config.augment.responses_path =
          resolve(base, (*it)["responses"].get<std::string>());
    }
  }
  if (auto it = doc.find("members"); it != doc.end()) {
    if (!it->is_array()) {
      throw ValidationError(where + ": 'members' must be an array");
    }
    for (const auto& member : *it) {
      if (!member.is_string()) {
        throw ValidationError(where + ": 'members' must hold strings");
      }
      config.members.push_back(member.get<std::string>());
    }
  }
  if (auto it = doc.find("irrelevant_comparison"); it != doc.end()) {
    std::string rule = it->get<std::string>();
    if (rule == "co_predicted") {
      config.irrelevant_comparison = IrrelevantComparison::CoPredicted;
    } else if (rule == "all_others") {
      config.irrelevant_comparison = IrrelevantComparison::AllOthers;
    } else {
      throw ValidationError(where + ": irrelevant_comparison must be "
                            "'co_predicted' or 'all_others'");
    }
  }

  config.source_hash = fnv1a64_file(path);
  config.validate();
  return config;
}

}  // namespace crisis
