#include "crisis/corpus.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "crisis/error.hpp"
#include "crisis/log.hpp"
#include "crisis/rng.hpp"

namespace crisis {

namespace {

using nlohmann::json;

const char* const kAllowedFields[] = {"tweet_id", "event_id", "text",
                                      "gold_its", "gold_priority"};

std::string line_prefix(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

std::string require_string(const json& obj, const char* field,
                           std::size_t line_no) {
  if (!obj.contains(field)) {
    throw ValidationError(line_prefix(line_no) + "missing required field '" +
                          field + "'");
  }
  const json& value = obj.at(field);
  if (!value.is_string()) {
    throw ValidationError(line_prefix(line_no) + "field '" + field +
                          "' must be a string");
  }
  return value.get<std::string>();
}

TweetRecord parse_record(const json& obj, std::size_t line_no,
                         const Taxonomy& taxonomy) {
  if (!obj.is_object()) {
    throw ValidationError(line_prefix(line_no) + "record must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* allowed : kAllowedFields) {
      if (item.key() == allowed) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(line_prefix(line_no) + "unknown field '" +
                            item.key() + "'");
    }
  }

  TweetRecord record;
  record.tweet_id = require_string(obj, "tweet_id", line_no);
  record.event_id = require_string(obj, "event_id", line_no);
  record.text = require_string(obj, "text", line_no);
  if (record.tweet_id.empty()) {
    throw ValidationError(line_prefix(line_no) + "tweet_id is empty");
  }

  if (obj.contains("gold_its")) {
    const json& its = obj.at("gold_its");
    if (!its.is_array()) {
      throw ValidationError(line_prefix(line_no) +
                            "field 'gold_its' must be an array of strings");
    }
    std::set<std::string> parsed;
    for (const json& entry : its) {
      if (!entry.is_string()) {
        throw ValidationError(line_prefix(line_no) +
                              "field 'gold_its' must be an array of strings");
      }
      std::string name = entry.get<std::string>();
      if (!taxonomy.contains(name)) {
        throw ValidationError(line_prefix(line_no) +
                              "unknown information type '" + name + "'");
      }
      parsed.insert(std::move(name));
    }
    if (parsed.empty()) {
      throw ValidationError(line_prefix(line_no) + "gold_its is empty");
    }
    // Judgments occasionally pair Irrelevant with substantive types. Keep the
    // record, drop Irrelevant, and say so; only predictions treat the
    // combination as invalid.
    if (parsed.size() > 1 && parsed.count(taxonomy.irrelevant_name())) {
      parsed.erase(taxonomy.irrelevant_name());
      logging::warn(line_prefix(line_no) + "tweet '" + record.tweet_id +
                    "' combines '" + taxonomy.irrelevant_name() +
                    "' with other types; dropping '" +
                    taxonomy.irrelevant_name() + "'");
    }
    record.gold_its = std::move(parsed);
  }

  if (obj.contains("gold_priority")) {
    const json& priority = obj.at("gold_priority");
    if (!priority.is_number()) {
      throw ValidationError(line_prefix(line_no) +
                            "field 'gold_priority' must be a number");
    }
    double value = priority.get<double>();
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ValidationError(line_prefix(line_no) + "priority out of range: " +
                            std::to_string(value));
    }
    record.gold_priority = value;
  }

  return record;
}

}  // namespace

std::vector<TweetRecord> load_corpus(const std::string& path,
                                     const Taxonomy& taxonomy) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open corpus file: " + path);
  }
  std::vector<TweetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      throw ValidationError(line_prefix(line_no) + "empty line");
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(line_prefix(line_no) + "malformed record: " +
                            e.what());
    }
    records.push_back(parse_record(obj, line_no, taxonomy));
  }
  return records;
}

void save_corpus(const std::string& path,
                 const std::vector<TweetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeError("cannot write corpus file: " + path);
  }
  for (const auto& record : records) {
    nlohmann::ordered_json obj;
    obj["tweet_id"] = record.tweet_id;
    obj["event_id"] = record.event_id;
    obj["text"] = record.text;
    if (record.gold_its) {
      obj["gold_its"] = *record.gold_its;
    }
    if (record.gold_priority) {
      obj["gold_priority"] = *record.gold_priority;
    }
    out << obj.dump() << '\n';
  }
}

std::pair<std::vector<TweetRecord>, std::vector<TweetRecord>> split_train_dev(
    const std::vector<TweetRecord>& records, double dev_fraction,
    std::uint64_t seed) {
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0)) {
    throw ValidationError("dev_fraction must be in (0, 1), got " +
                          std::to_string(dev_fraction));
  }
  if (records.empty()) {
    throw ValidationError("cannot split an empty record set");
  }

  const std::size_t n = records.size();
  const auto dev_size = static_cast<std::size_t>(
      std::llround(dev_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng(seed).substream("split").shuffle(order);

  std::vector<bool> in_dev(n, false);
  for (std::size_t i = 0; i < dev_size; ++i) in_dev[order[i]] = true;

  std::vector<TweetRecord> train;
  std::vector<TweetRecord> dev;
  train.reserve(n - dev_size);
  dev.reserve(dev_size);
  for (std::size_t i = 0; i < n; ++i) {
    (in_dev[i] ? dev : train).push_back(records[i]);
  }
  return {std::move(train), std::move(dev)};
}

LabelVector binarize(const std::set<std::string>& gold_its,
                     const Taxonomy& taxonomy) {
  if (gold_its.empty()) {
    throw ValidationError("cannot binarize an empty information-type set");
  }
  LabelVector labels;
  labels.bits.assign(taxonomy.size(), 0);
  for (const auto& name : gold_its) {
    labels.bits[taxonomy.index_of(name)] = 1;
  }
  return labels;
}

std::set<std::string> unbinarize(const LabelVector& labels,
                                 const Taxonomy& taxonomy) {
  if (labels.bits.size() != taxonomy.size()) {
    throw ValidationError("label vector length " +
                          std::to_string(labels.bits.size()) +
                          " does not match taxonomy size " +
                          std::to_string(taxonomy.size()));
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < labels.bits.size(); ++i) {
    if (labels.bits[i]) names.insert(taxonomy.types()[i]);
  }
  return names;
}

}  // namespace crisis
