#include "crisis/ensemble.hpp"

#include <algorithm>
#include <unordered_map>

#include "crisis/error.hpp"

namespace crisis {

namespace {

void validate_prediction(const Prediction& p, const Taxonomy& taxonomy,
                         const char* context) {
  if (p.its.empty()) {
    throw ValidationError(std::string(context) + ": tweet '" + p.tweet_id +
                          "' has an empty type set");
  }
  if (p.probs.size() != taxonomy.size()) {
    throw ValidationError(std::string(context) + ": tweet '" + p.tweet_id +
                          "' has " + std::to_string(p.probs.size()) +
                          " probabilities, expected " +
                          std::to_string(taxonomy.size()));
  }
  for (const auto& name : p.its) {
    if (!taxonomy.contains(name)) {
      throw ValidationError(std::string(context) + ": tweet '" + p.tweet_id +
                            "' carries unknown type '" + name + "'");
    }
  }
}

}  // namespace

std::vector<Prediction> ensemble_predictions(
    const std::vector<std::vector<Prediction>>& members,
    const Taxonomy& taxonomy) {
  if (members.empty()) {
    throw ValidationError("ensemble needs at least one member model");
  }
  const std::vector<Prediction>& first = members.front();
  for (const Prediction& p : first) {
    validate_prediction(p, taxonomy, "ensemble member 1");
  }

  std::unordered_map<std::string, std::size_t> position;
  position.reserve(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (!position.emplace(first[i].tweet_id, i).second) {
      throw ValidationError("ensemble member 1 repeats tweet '" +
                            first[i].tweet_id + "'");
    }
  }

  std::vector<Prediction> combined = first;
  for (std::size_t m = 1; m < members.size(); ++m) {
    const std::string context = "ensemble member " + std::to_string(m + 1);
    std::vector<bool> seen(first.size(), false);
    std::string extra;
    for (const Prediction& p : members[m]) {
      validate_prediction(p, taxonomy, context.c_str());
      auto it = position.find(p.tweet_id);
      if (it == position.end()) {
        extra += extra.empty() ? p.tweet_id : ", " + p.tweet_id;
        continue;
      }
      seen[it->second] = true;
      Prediction& target = combined[it->second];
      if (target.event_id != p.event_id) {
        throw ValidationError(context + ": tweet '" + p.tweet_id +
                              "' maps to event '" + p.event_id +
                              "' but member 1 says '" + target.event_id + "'");
      }
      target.its.insert(p.its.begin(), p.its.end());
      target.priority = std::max(target.priority, p.priority);
      for (std::size_t k = 0; k < target.probs.size(); ++k) {
        target.probs[k] = std::max(target.probs[k], p.probs[k]);
      }
    }
    std::string missing;
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        missing += missing.empty() ? first[i].tweet_id
                                   : ", " + first[i].tweet_id;
      }
    }
    if (!missing.empty() || !extra.empty()) {
      std::string detail = context + " does not cover the same tweet set";
      if (!missing.empty()) detail += "; missing: " + missing;
      if (!extra.empty()) detail += "; unexpected: " + extra;
      throw ValidationError(detail);
    }
  }
  return combined;
}

Prediction postprocess_irrelevant(Prediction prediction,
                                  const Taxonomy& taxonomy,
                                  IrrelevantComparison comparison) {
  validate_prediction(prediction, taxonomy, "postprocess");
  const std::string& irrelevant = taxonomy.irrelevant_name();

  if (prediction.its.count(irrelevant) && prediction.its.size() > 1) {
    const double p_irrelevant =
        prediction.probs[taxonomy.index_of(irrelevant)];
    bool dominates = true;
    if (comparison == IrrelevantComparison::CoPredicted) {
      for (const auto& name : prediction.its) {
        if (name == irrelevant) continue;
        if (!(p_irrelevant > prediction.probs[taxonomy.index_of(name)])) {
          dominates = false;
          break;
        }
      }
    } else {
      for (std::size_t k = 0; k < taxonomy.size(); ++k) {
        if (taxonomy.types()[k] == irrelevant) continue;
        if (!(p_irrelevant > prediction.probs[k])) {
          dominates = false;
          break;
        }
      }
    }
    if (dominates) {
      prediction.its = {irrelevant};
    } else {
      prediction.its.erase(irrelevant);
    }
  }

  if (prediction.its.size() == 1 && prediction.its.count(irrelevant)) {
    prediction.priority = 0.0;
  }
  return prediction;
}

}  // namespace crisis
