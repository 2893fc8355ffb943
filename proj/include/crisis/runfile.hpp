#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crisis/ensemble.hpp"
#include "crisis/taxonomy.hpp"

namespace crisis {

struct RunFileMeta {
  std::string run_name;
  std::uint64_t config_hash = 0;
  std::uint64_t taxonomy_hash = 0;
  std::int64_t generated_at = 0;  // unix seconds
};

struct RunRow {
  std::string event_id;
  std::string tweet_id;
  std::vector<std::string> its;  // taxonomy order
  double priority = 0.0;
};

struct RunFile {
  RunFileMeta meta;
  std::vector<RunRow> rows;
};

// Submission timestamp: SOURCE_DATE_EPOCH when set, otherwise 0, so runs
// from the same config are byte-identical.
std::int64_t run_timestamp();

// Submission format: '#'-prefixed metadata header, then one tab-separated
// row per tweet (event, tweet, comma-joined types, priority to 4 decimals).
void write_runfile(const std::vector<Prediction>& predictions,
                   const Taxonomy& taxonomy, const RunFileMeta& meta,
                   const std::string& path);
RunFile read_runfile(const std::string& path);

struct ProbsSidecar {
  std::uint64_t taxonomy_hash = 0;
  std::vector<std::string> types;
  std::vector<std::pair<std::string, std::vector<double>>> rows;  // tweet_id
};

// Per-type probabilities to 6 decimals, one row per tweet, aligned with the
// run file ordering; ensembling needs these alongside the submission rows.
void write_probs_sidecar(const std::vector<Prediction>& predictions,
                         const Taxonomy& taxonomy, const std::string& path);
ProbsSidecar read_probs_sidecar(const std::string& path);

// Reassembles full predictions from a run file plus its sidecar; both must
// cover the same tweets in the same order against the same taxonomy.
std::vector<Prediction> predictions_from_runfile(const RunFile& run,
                                                 const ProbsSidecar& probs,
                                                 const Taxonomy& taxonomy);

}  // namespace crisis
