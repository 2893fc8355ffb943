#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace crisis {

// The information-type inventory for one deployment: an ordered list of type
// names, the actionable subset, and the distinguished irrelevant type. The
// production taxonomy has 25 types with 6 actionable; reduced taxonomies are
// legal so tests can run on small label spaces.
class Taxonomy {
 public:
  Taxonomy(std::vector<std::string> types, std::vector<std::string> actionable,
           std::string irrelevant_name);

  // JSON object with keys: types (array), actionable (array), irrelevant.
  static Taxonomy from_file(const std::string& path);

  const std::vector<std::string>& types() const { return types_; }
  const std::vector<std::string>& actionable() const { return actionable_; }
  const std::string& irrelevant_name() const { return irrelevant_name_; }

  std::size_t size() const { return types_.size(); }
  bool contains(const std::string& name) const;
  bool is_actionable(const std::string& name) const;

  // Position of a type in the canonical order; throws ValidationError for
  // unknown names.
  std::size_t index_of(const std::string& name) const;

  // Content hash recorded in artifact headers so stale model/run pairs are
  // detectable.
  std::uint64_t hash() const;

 private:
  std::vector<std::string> types_;
  std::vector<std::string> actionable_;
  std::string irrelevant_name_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_set<std::string> actionable_set_;
};

}  // namespace crisis
