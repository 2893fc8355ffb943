#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crisis/taxonomy.hpp"

namespace crisis {

// The eight track metrics for one run, in leaderboard column order.
struct MetricReport {
  double ndcg = 0.0;
  double it_f1_a = 0.0;
  double it_f1_all = 0.0;
  double it_acc = 0.0;
  double pri_f1_a = 0.0;
  double pri_f1_all = 0.0;
  double pri_r_a = 0.0;
  double pri_r_all = 0.0;
};

enum class Subset { Actionable, All };

// Ordered thresholds partitioning [0,1] into Low/Medium/High/Critical.
struct PriorityLevels {
  std::vector<double> thresholds{0.25, 0.5, 0.75};

  void validate() const;
  // Level index in [0, thresholds.size()]; boundaries belong to the upper
  // level (p < t0 -> 0, t0 <= p < t1 -> 1, ...).
  std::size_t level(double priority) const;
  std::size_t level_count() const { return thresholds.size() + 1; }
};

// Macro-averaged per-type binary F1 over the actionable subset or all types.
// A type with no gold and no predicted positives contributes F1 = 0.
double it_f1(const std::vector<std::set<std::string>>& gold,
             const std::vector<std::set<std::string>>& predicted,
             const Taxonomy& taxonomy, Subset subset);

// Mean per-label binary accuracy over all types and tweets.
double it_accuracy(const std::vector<std::set<std::string>>& gold,
                   const std::vector<std::set<std::string>>& predicted,
                   const Taxonomy& taxonomy);

// Discretizes both priority lists into levels, then macro F1 / macro recall
// over levels. subset = Actionable restricts to tweets whose gold types
// intersect the actionable set; an empty restriction yields (0, 0).
std::pair<double, double> priority_f1_recall(
    const std::vector<double>& gold_priorities,
    const std::vector<double>& predicted_priorities,
    const std::vector<std::set<std::string>>& gold_its,
    const Taxonomy& taxonomy, const PriorityLevels& levels, Subset subset);

// Mean per-event nDCG of the top `cutoff` tweets ranked by predicted
// priority (ties by tweet_id), gain = gold priority, discount 1/log2(rank+1).
// An event with zero ideal DCG scores 1 by convention.
double ndcg_top100(const std::vector<double>& gold_priorities,
                   const std::vector<double>& predicted_priorities,
                   const std::vector<std::string>& event_ids,
                   const std::vector<std::string>& tweet_ids,
                   std::size_t cutoff = 100);

struct LeaderboardRow {
  std::string name;
  MetricReport report;
};

struct Leaderboard {
  std::vector<LeaderboardRow> rows;
  MetricReport med;
  MetricReport max;
};

// Per-metric median (midpoint of the two middle values for even counts) and
// maximum across the supplied runs.
Leaderboard aggregate_leaderboard(const std::vector<LeaderboardRow>& rows);

// Fixed-width text table in the leaderboard column order, med and max rows
// appended.
std::string format_leaderboard(const Leaderboard& board);

std::string format_report(const std::string& name, const MetricReport& report);

// Machine-readable record form (JSON object, metric name -> value).
std::string metric_report_json(const MetricReport& report);

}  // namespace crisis
