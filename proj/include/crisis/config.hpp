#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crisis/augment.hpp"
#include "crisis/ensemble.hpp"
#include "crisis/mtl.hpp"

namespace crisis {

// The nine run recipes: the ML baseline, the multi-task model with optional
// augmentation flavors, and ensembles over previously executed runs.
enum class PipelineKind {
  Baseline,      // sentence embeddings + Gaussian naive Bayes
  Mtl,           // multi-task fine-tuning
  MtlEda,        // + EDA class balancing
  MtlDga,        // + generator-based class balancing
  MtlDgaNla,     // + noisy-label annealing on the generated examples
  Ensemble,      // union/max over member runs
  EnsemblePost,  // ensemble + Irrelevant post-processing
};

PipelineKind pipeline_kind_from_string(const std::string& name);
std::string to_string(PipelineKind kind);

struct BaselineConfig {
  std::size_t embedding_dim = 64;
  std::uint64_t embedding_seed = 7;
};

struct AugmentConfig {
  int balance_target = 0;  // examples per type after balancing
  EdaParams eda;
  std::string lexicon_path;    // EDA synonym source
  std::string responses_path;  // canned generator continuations
};

struct RunConfig {
  std::string run_name;
  PipelineKind pipeline = PipelineKind::Mtl;
  std::string taxonomy_path;
  std::string train_path;  // unused by ensemble kinds
  std::string test_path;
  std::string output_root;
  TrainConfig train;
  BaselineConfig baseline;
  AugmentConfig augment;
  std::vector<std::string> members;  // ensemble member run names
  IrrelevantComparison irrelevant_comparison =
      IrrelevantComparison::CoPredicted;
  std::uint64_t source_hash = 0;  // hash of the config file bytes

  void validate() const;
};

// Parses a run config JSON file; relative paths resolve against the config
// file's directory. Unknown keys are rejected.
RunConfig load_run_config(const std::string& path);

}  // namespace crisis
