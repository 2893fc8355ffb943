#include "crisis/taxonomy.hpp"

#include <fstream>

#include <json.hpp>

#include "crisis/error.hpp"
#include "crisis/hash.hpp"

namespace crisis {

Taxonomy::Taxonomy(std::vector<std::string> types,
                   std::vector<std::string> actionable,
                   std::string irrelevant_name)
    : types_(std::move(types)),
      actionable_(std::move(actionable)),
      irrelevant_name_(std::move(irrelevant_name)) {
  if (types_.empty()) {
    throw ValidationError("taxonomy has no information types");
  }
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].empty()) {
      throw ValidationError("taxonomy contains an empty type name");
    }
    if (!index_.emplace(types_[i], i).second) {
      throw ValidationError("duplicate information type '" + types_[i] + "'");
    }
  }
  for (const auto& name : actionable_) {
    if (!index_.count(name)) {
      throw ValidationError("actionable type '" + name +
                            "' is not in the taxonomy");
    }
    if (!actionable_set_.insert(name).second) {
      throw ValidationError("duplicate actionable type '" + name + "'");
    }
  }
  if (!index_.count(irrelevant_name_)) {
    throw ValidationError("irrelevant type '" + irrelevant_name_ +
                          "' is not in the taxonomy");
  }
  if (actionable_set_.count(irrelevant_name_)) {
    throw ValidationError("irrelevant type '" + irrelevant_name_ +
                          "' cannot be actionable");
  }
}

Taxonomy Taxonomy::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open taxonomy file: " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed taxonomy file " + path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("types") ||
      !doc.contains("actionable") || !doc.contains("irrelevant")) {
    throw ValidationError(
        "taxonomy file must be an object with keys types, actionable, "
        "irrelevant: " +
        path);
  }
  try {
    return Taxonomy(doc.at("types").get<std::vector<std::string>>(),
                    doc.at("actionable").get<std::vector<std::string>>(),
                    doc.at("irrelevant").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed taxonomy file " + path + ": " + e.what());
  }
}

bool Taxonomy::contains(const std::string& name) const {
  return index_.count(name) > 0;
}

bool Taxonomy::is_actionable(const std::string& name) const {
  return actionable_set_.count(name) > 0;
}

std::size_t Taxonomy::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw ValidationError("unknown information type '" + name + "'");
  }
  return it->second;
}

std::uint64_t Taxonomy::hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& t : types_) {
    h = fnv1a64(t, h);
    h = fnv1a64("\n", h);
  }
  h = fnv1a64("|actionable:", h);
  for (const auto& a : actionable_) {
    h = fnv1a64(a, h);
    h = fnv1a64("\n", h);
  }
  h = fnv1a64("|irrelevant:", h);
  h = fnv1a64(irrelevant_name_, h);
  return h;
}

}  // namespace crisis
