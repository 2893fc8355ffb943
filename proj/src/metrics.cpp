#include "crisis/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "crisis/error.hpp"
#include "crisis/log.hpp"

namespace crisis {

namespace {

void check_aligned(std::size_t gold, std::size_t predicted) {
  if (gold != predicted) {
    throw ValidationError("gold count " + std::to_string(gold) +
                          " does not match predicted count " +
                          std::to_string(predicted));
  }
}

double safe_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct MetricColumn {
  const char* header;
  double MetricReport::*field;
};

constexpr MetricColumn kColumns[] = {
    {"nDCG", &MetricReport::ndcg},
    {"IT F1 [A]", &MetricReport::it_f1_a},
    {"IT F1 [All]", &MetricReport::it_f1_all},
    {"IT Acc.", &MetricReport::it_acc},
    {"Pri F1 [A]", &MetricReport::pri_f1_a},
    {"Pri F1 [All]", &MetricReport::pri_f1_all},
    {"Pri R [A]", &MetricReport::pri_r_a},
    {"Pri R [All]", &MetricReport::pri_r_all},
};

}  // namespace

void PriorityLevels::validate() const {
  if (thresholds.empty()) {
    throw ValidationError("priority levels need at least one threshold");
  }
  double previous = 0.0;
  for (double t : thresholds) {
    if (!(t > previous && t < 1.0)) {
      throw ValidationError(
          "priority thresholds must be strictly increasing within (0, 1)");
    }
    previous = t;
  }
}

std::size_t PriorityLevels::level(double priority) const {
  std::size_t lvl = 0;
  while (lvl < thresholds.size() && priority >= thresholds[lvl]) ++lvl;
  return lvl;
}

double it_f1(const std::vector<std::set<std::string>>& gold,
             const std::vector<std::set<std::string>>& predicted,
             const Taxonomy& taxonomy, Subset subset) {
  check_aligned(gold.size(), predicted.size());
  const std::vector<std::string>& names = subset == Subset::Actionable
                                              ? taxonomy.actionable()
                                              : taxonomy.types();
  double sum = 0.0;
  for (const auto& name : names) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool g = gold[i].count(name) > 0;
      const bool p = predicted[i].count(name) > 0;
      if (g && p) ++tp;
      else if (!g && p) ++fp;
      else if (g && !p) ++fn;
    }
    sum += safe_f1(tp, fp, fn);
  }
  return sum / static_cast<double>(names.size());
}

double it_accuracy(const std::vector<std::set<std::string>>& gold,
                   const std::vector<std::set<std::string>>& predicted,
                   const Taxonomy& taxonomy) {
  check_aligned(gold.size(), predicted.size());
  if (gold.empty()) {
    throw ValidationError("accuracy needs at least one tweet");
  }
  std::size_t matches = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto& name : taxonomy.types()) {
      const bool g = gold[i].count(name) > 0;
      const bool p = predicted[i].count(name) > 0;
      if (g == p) ++matches;
    }
  }
  return static_cast<double>(matches) /
         static_cast<double>(gold.size() * taxonomy.size());
}

std::pair<double, double> priority_f1_recall(
    const std::vector<double>& gold_priorities,
    const std::vector<double>& predicted_priorities,
    const std::vector<std::set<std::string>>& gold_its,
    const Taxonomy& taxonomy, const PriorityLevels& levels, Subset subset) {
  check_aligned(gold_priorities.size(), predicted_priorities.size());
  check_aligned(gold_priorities.size(), gold_its.size());
  levels.validate();

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < gold_priorities.size(); ++i) {
    if (subset == Subset::Actionable) {
      bool actionable = false;
      for (const auto& name : gold_its[i]) {
        if (taxonomy.is_actionable(name)) {
          actionable = true;
          break;
        }
      }
      if (!actionable) continue;
    }
    selected.push_back(i);
  }
  if (selected.empty()) {
    logging::warn("priority metrics: no tweets in the requested subset");
    return {0.0, 0.0};
  }

  const std::size_t n_levels = levels.level_count();
  std::vector<std::size_t> tp(n_levels, 0), fp(n_levels, 0), fn(n_levels, 0);
  for (std::size_t i : selected) {
    const std::size_t g = levels.level(gold_priorities[i]);
    const std::size_t p = levels.level(predicted_priorities[i]);
    if (g == p) {
      ++tp[g];
    } else {
      ++fn[g];
      ++fp[p];
    }
  }

  double f1_sum = 0.0;
  double recall_sum = 0.0;
  for (std::size_t lvl = 0; lvl < n_levels; ++lvl) {
    f1_sum += safe_f1(tp[lvl], fp[lvl], fn[lvl]);
    const std::size_t gold_count = tp[lvl] + fn[lvl];
    recall_sum += gold_count == 0 ? 0.0
                                  : static_cast<double>(tp[lvl]) /
                                        static_cast<double>(gold_count);
  }
  return {f1_sum / static_cast<double>(n_levels),
          recall_sum / static_cast<double>(n_levels)};
}

double ndcg_top100(const std::vector<double>& gold_priorities,
                   const std::vector<double>& predicted_priorities,
                   const std::vector<std::string>& event_ids,
                   const std::vector<std::string>& tweet_ids,
                   std::size_t cutoff) {
  check_aligned(gold_priorities.size(), predicted_priorities.size());
  check_aligned(gold_priorities.size(), event_ids.size());
  check_aligned(gold_priorities.size(), tweet_ids.size());
  if (gold_priorities.empty()) {
    throw ValidationError("nDCG needs at least one tweet");
  }
  if (cutoff == 0) {
    throw ValidationError("nDCG cutoff must be positive");
  }
  for (std::size_t i = 0; i < event_ids.size(); ++i) {
    if (event_ids[i].empty()) {
      throw ValidationError("missing event for tweet '" + tweet_ids[i] + "'");
    }
  }

  // std::map keeps events in sorted order, so the mean below is reduced in a
  // fixed order regardless of input order.
  std::map<std::string, std::vector<std::size_t>> events;
  for (std::size_t i = 0; i < event_ids.size(); ++i) {
    events[event_ids[i]].push_back(i);
  }

  auto discounted_sum = [&](const std::vector<std::size_t>& order) {
    double sum = 0.0;
    const std::size_t depth = std::min(cutoff, order.size());
    for (std::size_t rank = 1; rank <= depth; ++rank) {
      sum += gold_priorities[order[rank - 1]] /
             std::log2(static_cast<double>(rank) + 1.0);
    }
    return sum;
  };

  double total = 0.0;
  for (const auto& [event, indices] : events) {
    std::vector<std::size_t> by_predicted = indices;
    std::sort(by_predicted.begin(), by_predicted.end(),
              [&](std::size_t a, std::size_t b) {
                if (predicted_priorities[a] != predicted_priorities[b]) {
                  return predicted_priorities[a] > predicted_priorities[b];
                }
                return tweet_ids[a] < tweet_ids[b];
              });
    std::vector<std::size_t> by_gold = indices;
    std::sort(by_gold.begin(), by_gold.end(),
              [&](std::size_t a, std::size_t b) {
                if (gold_priorities[a] != gold_priorities[b]) {
                  return gold_priorities[a] > gold_priorities[b];
                }
                return tweet_ids[a] < tweet_ids[b];
              });
    const double dcg = discounted_sum(by_predicted);
    const double idcg = discounted_sum(by_gold);
    if (idcg == 0.0) {
      logging::info("event '" + event +
                    "' has zero ideal DCG; nDCG defaults to 1");
      total += 1.0;
    } else {
      total += dcg / idcg;
    }
  }
  return total / static_cast<double>(events.size());
}

Leaderboard aggregate_leaderboard(const std::vector<LeaderboardRow>& rows) {
  if (rows.empty()) {
    throw ValidationError("leaderboard aggregation needs at least one run");
  }
  Leaderboard board;
  board.rows = rows;
  for (const MetricColumn& column : kColumns) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) values.push_back(row.report.*column.field);
    board.med.*column.field = median_of(values);
    board.max.*column.field = *std::max_element(values.begin(), values.end());
  }
  return board;
}

namespace {

void append_row(std::ostringstream& out, const std::string& name,
                const MetricReport& report, std::size_t name_width) {
  out << name;
  for (std::size_t i = name.size(); i < name_width; ++i) out << ' ';
  char buf[16];
  for (const MetricColumn& column : kColumns) {
    std::snprintf(buf, sizeof(buf), "%12.4f", report.*column.field);
    out << buf;
  }
  out << '\n';
}

}  // namespace

std::string format_leaderboard(const Leaderboard& board) {
  std::size_t name_width = 4;
  for (const auto& row : board.rows) {
    name_width = std::max(name_width, row.name.size());
  }
  name_width += 2;

  std::ostringstream out;
  for (std::size_t i = 0; i < name_width; ++i) out << ' ';
  char buf[16];
  for (const MetricColumn& column : kColumns) {
    std::snprintf(buf, sizeof(buf), "%12s", column.header);
    out << buf;
  }
  out << '\n';
  for (const auto& row : board.rows) {
    append_row(out, row.name, row.report, name_width);
  }
  append_row(out, "med", board.med, name_width);
  append_row(out, "max", board.max, name_width);
  return out.str();
}

std::string format_report(const std::string& name,
                          const MetricReport& report) {
  Leaderboard single;
  single.rows.push_back({name, report});
  single.med = report;
  single.max = report;
  std::ostringstream out;
  std::size_t name_width = std::max<std::size_t>(4, name.size()) + 2;
  for (std::size_t i = 0; i < name_width; ++i) out << ' ';
  char buf[16];
  for (const MetricColumn& column : kColumns) {
    std::snprintf(buf, sizeof(buf), "%12s", column.header);
    out << buf;
  }
  out << '\n';
  append_row(out, name, report, name_width);
  return out.str();
}

std::string metric_report_json(const MetricReport& report) {
  nlohmann::ordered_json j = {
      {"ndcg", report.ndcg},
      {"it_f1_actionable", report.it_f1_a},
      {"it_f1_all", report.it_f1_all},
      {"it_accuracy", report.it_acc},
      {"priority_f1_actionable", report.pri_f1_a},
      {"priority_f1_all", report.pri_f1_all},
      {"priority_recall_actionable", report.pri_r_a},
      {"priority_recall_all", report.pri_r_all}};
  return j.dump(2) + "\n";
}

}  // namespace crisis
