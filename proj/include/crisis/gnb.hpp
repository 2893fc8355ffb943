#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crisis/corpus.hpp"
#include "crisis/taxonomy.hpp"

namespace crisis {

// Mapping IT name -> mean training priority; the ML run derives its priority
// estimate from predicted types through this table.
struct PriorityTable {
  std::map<std::string, double> values;
};

// One independent present/absent Gaussian model per information type
// (binary-relevance lift of GaussianNB to the multi-label setting).
struct GnbLabelStats {
  // Presence is impossible/forced when a class had no training examples.
  enum class Degenerate { None, NoPositives, NoNegatives };

  double prior_present = 0.0;
  std::vector<double> mean_present;
  std::vector<double> var_present;
  std::vector<double> mean_absent;
  std::vector<double> var_absent;
  Degenerate degenerate = Degenerate::None;
};

struct GaussianNBModel {
  std::size_t dim = 0;
  // Added to every class-conditional variance when evaluating densities.
  double smoothing = 0.0;
  std::uint64_t taxonomy_hash = 0;
  std::vector<GnbLabelStats> per_label;  // aligned to taxonomy order
  // Empty until attached; persisted with the model so the ML run is one file.
  PriorityTable priorities;
};

struct GnbPrediction {
  std::vector<double> posteriors;  // P(present | x) per type, taxonomy order
  std::set<std::string> its;       // posterior >= 0.5, argmax fallback
};

// Fits per-type class-conditional Gaussians with empirical priors.
// smoothing = 1e-9 * max feature variance over the whole training matrix.
GaussianNBModel fit_gnb(const std::vector<std::vector<double>>& features,
                        const std::vector<LabelVector>& labels,
                        const Taxonomy& taxonomy);

GnbPrediction predict_gnb(const GaussianNBModel& model,
                          const std::vector<double>& feature,
                          const Taxonomy& taxonomy);

// Flat text format: versioned header, taxonomy hash, per-type statistics as
// decimal text, optional priority table section.
void save_gnb(const GaussianNBModel& model, const std::string& path,
              const Taxonomy& taxonomy);
GaussianNBModel load_gnb(const std::string& path, const Taxonomy& taxonomy);

// entry[IT] = mean gold priority of training tweets carrying that IT;
// types with no training tweets default to 0 (logged).
PriorityTable build_priority_table(const std::vector<TweetRecord>& train,
                                   const Taxonomy& taxonomy);

// Max of the mapped values over the predicted set.
double map_priority(const std::set<std::string>& predicted_its,
                    const PriorityTable& table);

}  // namespace crisis
