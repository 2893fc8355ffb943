#pragma once

#include <set>
#include <string>
#include <vector>

#include "crisis/taxonomy.hpp"

namespace crisis {

// One tweet's final output: predicted types, per-type probabilities aligned
// to the taxonomy order, and a priority score in [0,1].
struct Prediction {
  std::string tweet_id;
  std::string event_id;
  std::set<std::string> its;
  std::vector<double> probs;
  double priority = 0.0;
};

// Union of member type sets, max of member priorities, elementwise max of
// member probabilities. Members must cover the same tweet set; output keeps
// the first member's tweet order.
std::vector<Prediction> ensemble_predictions(
    const std::vector<std::vector<Prediction>>& members,
    const Taxonomy& taxonomy);

// Which probabilities the Irrelevant probability is compared against when a
// prediction mixes Irrelevant with other types. The track wording is
// ambiguous; co-predicted is the default reading.
enum class IrrelevantComparison { CoPredicted, AllOthers };

// Resolves predictions that mix Irrelevant with substantive types: Irrelevant
// wins (and priority drops to 0) only when its probability strictly exceeds
// every compared probability; otherwise Irrelevant is dropped. Any output
// reduced to exactly {Irrelevant} carries priority 0.
Prediction postprocess_irrelevant(
    Prediction prediction, const Taxonomy& taxonomy,
    IrrelevantComparison comparison = IrrelevantComparison::CoPredicted);

}  // namespace crisis
