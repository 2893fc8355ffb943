#pragma once

#include <string>
#include <vector>

#include "crisis/config.hpp"
#include "crisis/corpus.hpp"
#include "crisis/metrics.hpp"
#include "crisis/runfile.hpp"
#include "crisis/taxonomy.hpp"

namespace crisis {

struct RunArtifacts {
  std::string run_dir;
  std::string runfile_path;
  std::string sidecar_path;
  std::size_t rows = 0;
};

// Builds the augmented examples a training run would use: splits off the dev
// fraction, then balances the remaining train split per the config. Only
// meaningful for the augmenting pipeline kinds.
std::vector<AugmentedExample> build_augmentations(const RunConfig& config,
                                                  const Taxonomy& taxonomy);
void write_augmented_corpus(const std::vector<AugmentedExample>& augmented,
                            const std::string& path);

// Trains the configured model and writes it (plus train_log.jsonl and
// augmented.jsonl where applicable) under <output_root>/<run_name>/.
// Returns the model path. Ensemble kinds have nothing to train.
std::string train_model(const RunConfig& config);

// Loads the previously trained model from the run directory and scores the
// test corpus, writing run.tsv, probs.tsv and provenance.json.
RunArtifacts predict_with_model(const RunConfig& config);

// Executes one configured run end to end: train + predict for model kinds,
// member combination for ensemble kinds (members are read from sibling run
// directories under the same output_root).
RunArtifacts execute_run(const RunConfig& config);

// Scores a run file against a fully labeled gold corpus. The run must cover
// exactly the gold tweet set; gaps are reported with the offending ids.
MetricReport evaluate_run(const RunFile& run,
                          const std::vector<TweetRecord>& gold,
                          const Taxonomy& taxonomy);
MetricReport evaluate_runfile(const std::string& path,
                              const std::vector<TweetRecord>& gold,
                              const Taxonomy& taxonomy);

// Scores several run files and aggregates them leaderboard-style (per-metric
// median and max).
Leaderboard compare_runs(const std::vector<std::string>& runfile_paths,
                         const std::vector<TweetRecord>& gold,
                         const Taxonomy& taxonomy);

}  // namespace crisis
