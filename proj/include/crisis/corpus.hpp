#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crisis/taxonomy.hpp"

namespace crisis {

struct TweetRecord {
  std::string tweet_id;
  std::string event_id;
  std::string text;
  std::optional<std::set<std::string>> gold_its;
  std::optional<double> gold_priority;
};

// Length-|taxonomy| binary target aligned to the taxonomy order.
struct LabelVector {
  std::vector<std::uint8_t> bits;
};

// Loads a line-delimited corpus (one JSON object per line, fields exactly:
// tweet_id, event_id, text, gold_its?, gold_priority?). Any invalid line
// fails the whole load; errors name the offending line.
std::vector<TweetRecord> load_corpus(const std::string& path,
                                     const Taxonomy& taxonomy);

// Writes records back in the corpus schema, one JSON object per line.
void save_corpus(const std::string& path,
                 const std::vector<TweetRecord>& records);

// Uniform random partition; |dev| = round(dev_fraction * |records|).
// Deterministic for a fixed seed, original order preserved in both parts.
std::pair<std::vector<TweetRecord>, std::vector<TweetRecord>> split_train_dev(
    const std::vector<TweetRecord>& records, double dev_fraction,
    std::uint64_t seed);

LabelVector binarize(const std::set<std::string>& gold_its,
                     const Taxonomy& taxonomy);

std::set<std::string> unbinarize(const LabelVector& labels,
                                 const Taxonomy& taxonomy);

}  // namespace crisis
