#include "crisis/gnb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "crisis/error.hpp"
#include "crisis/hash.hpp"
#include "crisis/log.hpp"

namespace crisis {

namespace {

constexpr double kVarSmoothingFactor = 1e-9;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct ClassMoments {
  std::vector<double> mean;
  std::vector<double> var;  // population variance
};

ClassMoments moments(const std::vector<std::vector<double>>& features,
                     const std::vector<std::size_t>& rows, std::size_t dim) {
  ClassMoments m;
  m.mean.assign(dim, 0.0);
  m.var.assign(dim, 0.0);
  const auto n = static_cast<double>(rows.size());
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < dim; ++j) m.mean[j] += features[r][j];
  }
  for (std::size_t j = 0; j < dim; ++j) m.mean[j] /= n;
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = features[r][j] - m.mean[j];
      m.var[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) m.var[j] /= n;
  return m;
}

double log_gaussian(double x, double mean, double var) {
  const double diff = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_vector(std::ostream& out, const char* tag,
                  const std::vector<double>& values) {
  out << tag;
  for (double v : values) out << ' ' << format_double(v);
  out << '\n';
}

std::vector<double> read_vector(std::istream& in, const std::string& tag,
                                std::size_t dim, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("truncated model file: " + path);
  }
  std::istringstream ss(line);
  std::string got;
  ss >> got;
  if (got != tag) {
    throw ValidationError("model file " + path + ": expected '" + tag +
                          "', got '" + got + "'");
  }
  std::vector<double> values(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    if (!(ss >> values[j])) {
      throw ValidationError("model file " + path + ": short '" + tag +
                            "' row");
    }
  }
  return values;
}

}  // namespace

GaussianNBModel fit_gnb(const std::vector<std::vector<double>>& features,
                        const std::vector<LabelVector>& labels,
                        const Taxonomy& taxonomy) {
  if (features.size() != labels.size()) {
    throw ValidationError("feature count " + std::to_string(features.size()) +
                          " does not match label count " +
                          std::to_string(labels.size()));
  }
  if (features.size() < 2) {
    throw ValidationError("fitting requires at least 2 examples");
  }
  const std::size_t n = features.size();
  const std::size_t dim = features[0].size();
  if (dim == 0) {
    throw ValidationError("features must have at least one dimension");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != dim) {
      throw ValidationError("ragged feature matrix at row " +
                            std::to_string(i));
    }
    if (labels[i].bits.size() != taxonomy.size()) {
      throw ValidationError("label vector length mismatch at row " +
                            std::to_string(i));
    }
  }

  GaussianNBModel model;
  model.dim = dim;
  model.taxonomy_hash = taxonomy.hash();

  // Smoothing follows the conventional GaussianNB stabilization: a small
  // fraction of the largest overall feature variance.
  std::vector<std::size_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
  const ClassMoments overall = moments(features, all_rows, dim);
  const double max_var =
      *std::max_element(overall.var.begin(), overall.var.end());
  model.smoothing =
      max_var > 0.0 ? kVarSmoothingFactor * max_var : kVarSmoothingFactor;

  model.per_label.resize(taxonomy.size());
  for (std::size_t k = 0; k < taxonomy.size(); ++k) {
    std::vector<std::size_t> present;
    std::vector<std::size_t> absent;
    for (std::size_t i = 0; i < n; ++i) {
      (labels[i].bits[k] ? present : absent).push_back(i);
    }
    GnbLabelStats& stats = model.per_label[k];
    stats.prior_present = static_cast<double>(present.size()) /
                          static_cast<double>(n);
    if (present.empty()) {
      stats.degenerate = GnbLabelStats::Degenerate::NoPositives;
      logging::warn("type '" + taxonomy.types()[k] +
                    "' has no positive training examples; always predicted "
                    "absent");
      continue;
    }
    if (absent.empty()) {
      stats.degenerate = GnbLabelStats::Degenerate::NoNegatives;
      logging::warn("type '" + taxonomy.types()[k] +
                    "' has no negative training examples; always predicted "
                    "present");
      const ClassMoments mp = moments(features, present, dim);
      stats.mean_present = mp.mean;
      stats.var_present = mp.var;
      continue;
    }
    const ClassMoments mp = moments(features, present, dim);
    const ClassMoments ma = moments(features, absent, dim);
    stats.mean_present = mp.mean;
    stats.var_present = mp.var;
    stats.mean_absent = ma.mean;
    stats.var_absent = ma.var;
  }
  return model;
}

GnbPrediction predict_gnb(const GaussianNBModel& model,
                          const std::vector<double>& feature,
                          const Taxonomy& taxonomy) {
  if (feature.size() != model.dim) {
    throw ValidationError("feature dimension " +
                          std::to_string(feature.size()) +
                          " does not match model dimension " +
                          std::to_string(model.dim));
  }
  if (model.per_label.size() != taxonomy.size()) {
    throw ValidationError("model label count does not match taxonomy");
  }

  GnbPrediction prediction;
  prediction.posteriors.resize(taxonomy.size());
  for (std::size_t k = 0; k < taxonomy.size(); ++k) {
    const GnbLabelStats& stats = model.per_label[k];
    double posterior;
    if (stats.degenerate == GnbLabelStats::Degenerate::NoPositives) {
      posterior = 0.0;
    } else if (stats.degenerate == GnbLabelStats::Degenerate::NoNegatives) {
      posterior = 1.0;
    } else {
      double lp = std::log(stats.prior_present);
      double la = std::log(1.0 - stats.prior_present);
      for (std::size_t j = 0; j < model.dim; ++j) {
        lp += log_gaussian(feature[j], stats.mean_present[j],
                           stats.var_present[j] + model.smoothing);
        la += log_gaussian(feature[j], stats.mean_absent[j],
                           stats.var_absent[j] + model.smoothing);
      }
      const double m = std::max(lp, la);
      const double pp = std::exp(lp - m);
      const double pa = std::exp(la - m);
      posterior = pp / (pp + pa);
    }
    prediction.posteriors[k] = posterior;
    if (posterior >= 0.5) {
      prediction.its.insert(taxonomy.types()[k]);
    }
  }

  // Every tweet must receive at least one type; fall back to the argmax
  // posterior, ties resolved by taxonomy order.
  if (prediction.its.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < prediction.posteriors.size(); ++k) {
      if (prediction.posteriors[k] > prediction.posteriors[best]) best = k;
    }
    prediction.its.insert(taxonomy.types()[best]);
  }
  return prediction;
}

void save_gnb(const GaussianNBModel& model, const std::string& path,
              const Taxonomy& taxonomy) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeError("cannot write model file: " + path);
  }
  out << "crisis-gnb 1\n";
  out << "taxonomy fnv1a:" << hex64(model.taxonomy_hash) << '\n';
  out << "dim " << model.dim << '\n';
  out << "smoothing " << format_double(model.smoothing) << '\n';
  out << "labels " << model.per_label.size() << '\n';
  for (std::size_t k = 0; k < model.per_label.size(); ++k) {
    const GnbLabelStats& stats = model.per_label[k];
    const char* degenerate =
        stats.degenerate == GnbLabelStats::Degenerate::NoPositives ? "no_pos"
        : stats.degenerate == GnbLabelStats::Degenerate::NoNegatives
            ? "no_neg"
            : "none";
    out << "label " << taxonomy.types()[k] << " prior "
        << format_double(stats.prior_present) << " degenerate " << degenerate
        << '\n';
    if (stats.degenerate != GnbLabelStats::Degenerate::NoPositives) {
      write_vector(out, "mean_present", stats.mean_present);
      write_vector(out, "var_present", stats.var_present);
    }
    if (stats.degenerate == GnbLabelStats::Degenerate::None) {
      write_vector(out, "mean_absent", stats.mean_absent);
      write_vector(out, "var_absent", stats.var_absent);
    }
  }
  out << "priority_table " << model.priorities.values.size() << '\n';
  for (const auto& [name, value] : model.priorities.values) {
    out << name << ' ' << format_double(value) << '\n';
  }
  if (!out) {
    throw RuntimeError("failed writing model file: " + path);
  }
}

GaussianNBModel load_gnb(const std::string& path, const Taxonomy& taxonomy) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open model file: " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != "crisis-gnb 1") {
    throw ValidationError("not a crisis-gnb v1 model file: " + path);
  }

  GaussianNBModel model;
  std::string tag;
  std::string taxonomy_tag;
  in >> tag >> taxonomy_tag;
  if (tag != "taxonomy" || taxonomy_tag.rfind("fnv1a:", 0) != 0) {
    throw ValidationError("model file " + path + ": missing taxonomy hash");
  }
  model.taxonomy_hash = std::stoull(taxonomy_tag.substr(6), nullptr, 16);
  if (model.taxonomy_hash != taxonomy.hash()) {
    throw ValidationError("model file " + path +
                          " was fitted against a different taxonomy");
  }
  std::size_t label_count = 0;
  in >> tag >> model.dim;
  if (tag != "dim") {
    throw ValidationError("model file " + path + ": missing dim");
  }
  in >> tag >> model.smoothing;
  if (tag != "smoothing") {
    throw ValidationError("model file " + path + ": missing smoothing");
  }
  in >> tag >> label_count;
  if (tag != "labels" || label_count != taxonomy.size()) {
    throw ValidationError("model file " + path +
                          ": label count does not match taxonomy");
  }
  std::getline(in, line);  // finish the labels line

  model.per_label.resize(label_count);
  for (std::size_t k = 0; k < label_count; ++k) {
    if (!std::getline(in, line)) {
      throw ValidationError("truncated model file: " + path);
    }
    std::istringstream ss(line);
    std::string name, prior_tag, degenerate_tag, degenerate;
    double prior = 0.0;
    ss >> tag >> name >> prior_tag >> prior >> degenerate_tag >> degenerate;
    if (tag != "label" || prior_tag != "prior" ||
        degenerate_tag != "degenerate") {
      throw ValidationError("model file " + path + ": malformed label row");
    }
    if (name != taxonomy.types()[k]) {
      throw ValidationError("model file " + path + ": type order mismatch ('" +
                            name + "' vs '" + taxonomy.types()[k] + "')");
    }
    GnbLabelStats& stats = model.per_label[k];
    stats.prior_present = prior;
    if (degenerate == "no_pos") {
      stats.degenerate = GnbLabelStats::Degenerate::NoPositives;
      continue;
    }
    if (degenerate == "no_neg") {
      stats.degenerate = GnbLabelStats::Degenerate::NoNegatives;
      stats.mean_present = read_vector(in, "mean_present", model.dim, path);
      stats.var_present = read_vector(in, "var_present", model.dim, path);
      continue;
    }
    stats.mean_present = read_vector(in, "mean_present", model.dim, path);
    stats.var_present = read_vector(in, "var_present", model.dim, path);
    stats.mean_absent = read_vector(in, "mean_absent", model.dim, path);
    stats.var_absent = read_vector(in, "var_absent", model.dim, path);
  }

  std::size_t table_size = 0;
  in >> tag >> table_size;
  if (tag != "priority_table") {
    throw ValidationError("model file " + path + ": missing priority table");
  }
  for (std::size_t i = 0; i < table_size; ++i) {
    std::string name;
    double value = 0.0;
    if (!(in >> name >> value)) {
      throw ValidationError("truncated priority table in " + path);
    }
    model.priorities.values[name] = value;
  }
  return model;
}

PriorityTable build_priority_table(const std::vector<TweetRecord>& train,
                                   const Taxonomy& taxonomy) {
  std::vector<double> sums(taxonomy.size(), 0.0);
  std::vector<std::size_t> counts(taxonomy.size(), 0);
  for (const auto& record : train) {
    if (!record.gold_its || !record.gold_priority) {
      throw ValidationError("priority table requires gold types and priority "
                            "on every training record (tweet '" +
                            record.tweet_id + "')");
    }
    for (const auto& name : *record.gold_its) {
      const std::size_t k = taxonomy.index_of(name);
      sums[k] += *record.gold_priority;
      counts[k] += 1;
    }
  }
  PriorityTable table;
  for (std::size_t k = 0; k < taxonomy.size(); ++k) {
    if (counts[k] == 0) {
      logging::warn("type '" + taxonomy.types()[k] +
                    "' has no training tweets; priority defaults to 0");
      table.values[taxonomy.types()[k]] = 0.0;
    } else {
      table.values[taxonomy.types()[k]] =
          sums[k] / static_cast<double>(counts[k]);
    }
  }
  return table;
}

double map_priority(const std::set<std::string>& predicted_its,
                    const PriorityTable& table) {
  if (predicted_its.empty()) {
    throw ValidationError(
        "cannot map priority for an empty information-type set");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& name : predicted_its) {
    auto it = table.values.find(name);
    if (it == table.values.end()) {
      throw ValidationError("priority table has no entry for '" + name + "'");
    }
    best = std::max(best, it->second);
  }
  return best;
}

}  // namespace crisis
