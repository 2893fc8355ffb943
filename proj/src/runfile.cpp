#include "crisis/runfile.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "crisis/error.hpp"
#include "crisis/hash.hpp"

namespace crisis {

namespace {

std::string format_fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_unit_interval(const std::string& text, const std::string& where) {
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError(where + ": bad priority '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ValidationError(where + ": bad priority '" + text + "'");
  }
  return v;
}

std::uint64_t parse_hash(const std::string& text, const std::string& where) {
  if (text.rfind("fnv1a:", 0) != 0) {
    throw ValidationError(where + ": expected fnv1a:<hex> hash, got '" + text +
                          "'");
  }
  try {
    return std::stoull(text.substr(6), nullptr, 16);
  } catch (const std::exception&) {
    throw ValidationError(where + ": bad hash '" + text + "'");
  }
}

// "# key: value" -> value
std::string header_value(const std::string& line, const std::string& key,
                         const std::string& path) {
  std::string prefix = "# " + key + ": ";
  if (line.rfind(prefix, 0) != 0) {
    throw ValidationError("'" + path + "': expected '" + prefix +
                          "...' header, got '" + line + "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

std::int64_t run_timestamp() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH");
      env != nullptr && *env != '\0') {
    try {
      return std::stoll(env);
    } catch (const std::exception&) {
      throw ValidationError("SOURCE_DATE_EPOCH is not an integer");
    }
  }
  return 0;
}

void write_runfile(const std::vector<Prediction>& predictions,
                   const Taxonomy& taxonomy, const RunFileMeta& meta,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write run file '" + path + "'");
  out << "# run_name: " << meta.run_name << "\n";
  out << "# config: fnv1a:" << hex64(meta.config_hash) << "\n";
  out << "# taxonomy: fnv1a:" << hex64(meta.taxonomy_hash) << "\n";
  out << "# generated_at: " << meta.generated_at << "\n";
  for (const auto& pred : predictions) {
    if (pred.its.empty()) {
      throw ValidationError("tweet '" + pred.tweet_id +
                            "' has no predicted types");
    }
    if (!(pred.priority >= 0.0) || !(pred.priority <= 1.0)) {
      throw ValidationError("tweet '" + pred.tweet_id +
                            "' has priority outside [0,1]");
    }
    out << pred.event_id << "\t" << pred.tweet_id << "\t";
    bool first = true;
    for (const auto& name : taxonomy.types()) {
      if (pred.its.count(name) == 0) continue;
      out << (first ? "" : ",") << name;
      first = false;
    }
    if (first) {
      // Predicted types outside the taxonomy would vanish silently.
      throw ValidationError("tweet '" + pred.tweet_id +
                            "' predicts no known taxonomy type");
    }
    out << "\t" << format_fixed(pred.priority, 4) << "\n";
  }
  if (!out) throw RuntimeError("cannot write run file '" + path + "'");
}

RunFile read_runfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open run file '" + path + "'");
  RunFile run;
  std::string line;
  auto next = [&](const std::string& key) {
    if (!std::getline(in, line)) {
      throw ValidationError("'" + path + "': missing '" + key + "' header");
    }
    return header_value(line, key, path);
  };
  run.meta.run_name = next("run_name");
  run.meta.config_hash = parse_hash(next("config"), "'" + path + "'");
  run.meta.taxonomy_hash = parse_hash(next("taxonomy"), "'" + path + "'");
  try {
    run.meta.generated_at = std::stoll(next("generated_at"));
  } catch (const std::exception&) {
    throw ValidationError("'" + path + "': bad generated_at header");
  }

  std::size_t line_no = 4;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      throw ValidationError("'" + path + "' line " + std::to_string(line_no) +
                            ": empty row");
    }
    std::string where = "'" + path + "' line " + std::to_string(line_no);
    std::vector<std::string> fields = split_on(line, '\t');
    if (fields.size() != 4) {
      throw ValidationError(where + ": expected 4 tab-separated fields, got " +
                            std::to_string(fields.size()));
    }
    RunRow row;
    row.event_id = fields[0];
    row.tweet_id = fields[1];
    row.its = split_on(fields[2], ',');
    if (row.event_id.empty() || row.tweet_id.empty()) {
      throw ValidationError(where + ": empty event or tweet id");
    }
    for (const auto& name : row.its) {
      if (name.empty()) {
        throw ValidationError(where + ": empty information type");
      }
    }
    if (row.its.empty()) {
      throw ValidationError(where + ": no information types");
    }
    row.priority = parse_unit_interval(fields[3], where);
    run.rows.push_back(std::move(row));
  }
  return run;
}

void write_probs_sidecar(const std::vector<Prediction>& predictions,
                         const Taxonomy& taxonomy, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write sidecar '" + path + "'");
  out << "# taxonomy: fnv1a:" << hex64(taxonomy.hash()) << "\n";
  out << "# types: ";
  for (std::size_t k = 0; k < taxonomy.size(); ++k) {
    out << (k ? "," : "") << taxonomy.types()[k];
  }
  out << "\n";
  for (const auto& pred : predictions) {
    if (pred.probs.size() != taxonomy.size()) {
      throw ValidationError("tweet '" + pred.tweet_id + "' carries " +
                            std::to_string(pred.probs.size()) +
                            " probabilities, expected " +
                            std::to_string(taxonomy.size()));
    }
    out << pred.tweet_id;
    for (double p : pred.probs) out << "\t" << format_fixed(p, 6);
    out << "\n";
  }
  if (!out) throw RuntimeError("cannot write sidecar '" + path + "'");
}

ProbsSidecar read_probs_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open sidecar '" + path + "'");
  ProbsSidecar sidecar;
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("'" + path + "': missing taxonomy header");
  }
  sidecar.taxonomy_hash =
      parse_hash(header_value(line, "taxonomy", path), "'" + path + "'");
  if (!std::getline(in, line)) {
    throw ValidationError("'" + path + "': missing types header");
  }
  sidecar.types = split_on(header_value(line, "types", path), ',');

  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    std::string where = "'" + path + "' line " + std::to_string(line_no);
    std::vector<std::string> fields = split_on(line, '\t');
    if (fields.size() != sidecar.types.size() + 1) {
      throw ValidationError(where + ": expected " +
                            std::to_string(sidecar.types.size() + 1) +
                            " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> probs;
    probs.reserve(sidecar.types.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      probs.push_back(parse_unit_interval(fields[i], where));
    }
    sidecar.rows.emplace_back(fields[0], std::move(probs));
  }
  return sidecar;
}

std::vector<Prediction> predictions_from_runfile(const RunFile& run,
                                                 const ProbsSidecar& probs,
                                                 const Taxonomy& taxonomy) {
  if (run.meta.taxonomy_hash != taxonomy.hash() ||
      probs.taxonomy_hash != taxonomy.hash()) {
    throw ValidationError("run '" + run.meta.run_name +
                          "' was produced against a different taxonomy");
  }
  if (probs.types != taxonomy.types()) {
    throw ValidationError("sidecar type order does not match the taxonomy");
  }
  if (run.rows.size() != probs.rows.size()) {
    throw ValidationError("run '" + run.meta.run_name + "' has " +
                          std::to_string(run.rows.size()) +
                          " rows but its sidecar has " +
                          std::to_string(probs.rows.size()));
  }
  std::vector<Prediction> out;
  out.reserve(run.rows.size());
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    if (run.rows[i].tweet_id != probs.rows[i].first) {
      throw ValidationError("run '" + run.meta.run_name + "' row " +
                            std::to_string(i + 1) + " is tweet '" +
                            run.rows[i].tweet_id + "' but the sidecar has '" +
                            probs.rows[i].first + "'");
    }
    Prediction pred;
    pred.tweet_id = run.rows[i].tweet_id;
    pred.event_id = run.rows[i].event_id;
    for (const auto& name : run.rows[i].its) {
      taxonomy.index_of(name);
      pred.its.insert(name);
    }
    pred.probs = probs.rows[i].second;
    pred.priority = run.rows[i].priority;
    out.push_back(std::move(pred));
  }
  return out;
}

}  // namespace crisis
