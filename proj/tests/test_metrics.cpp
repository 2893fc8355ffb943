#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "json.hpp"

#include "crisis/error.hpp"
#include "crisis/metrics.hpp"
#include "crisis/rng.hpp"
#include "support.hpp"

using namespace crisis;
using testsup::tiny_taxonomy;

namespace {

using Sets = std::vector<std::set<std::string>>;

MetricReport report_of(double base) {
  MetricReport r;
  r.ndcg = base;
  r.it_f1_a = base + 0.01;
  r.it_f1_all = base + 0.02;
  r.it_acc = base + 0.03;
  r.pri_f1_a = base + 0.04;
  r.pri_f1_all = base + 0.05;
  r.pri_r_a = base + 0.06;
  r.pri_r_all = base + 0.07;
  return r;
}

}  // namespace

TEST_CASE("priority levels") {
  PriorityLevels levels;
  CHECK(levels.level_count() == 4);
  CHECK(levels.level(0.0) == 0);
  CHECK(levels.level(0.24) == 0);
  CHECK(levels.level(0.25) == 1);  // boundaries belong to the upper level
  CHECK(levels.level(0.49) == 1);
  CHECK(levels.level(0.5) == 2);
  CHECK(levels.level(0.75) == 3);
  CHECK(levels.level(1.0) == 3);

  PriorityLevels bad;
  bad.thresholds.clear();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.thresholds = {0.5, 0.25};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.thresholds = {0.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.thresholds = {0.5, 1.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("it_f1") {
  Taxonomy tax = tiny_taxonomy();

  SUBCASE("perfect and disjoint predictions") {
    // Every type appears at least once; a type with no gold and no
    // predicted positives scores 0, not 1, so it would drag the mean.
    Sets gold{{"Alpha"}, {"Beta", "Gamma"}, {"Irrelevant"}};
    CHECK(it_f1(gold, gold, tax, Subset::All) == 1.0);
    CHECK(it_f1(gold, gold, tax, Subset::Actionable) == 1.0);
    Sets wrong{{"Irrelevant"}, {"Irrelevant"}, {"Irrelevant"}};
    CHECK(it_f1(gold, wrong, tax, Subset::Actionable) == 0.0);
  }
  SUBCASE("hand-computed macro average") {
    Sets gold{{"Alpha"}, {"Alpha", "Beta"}, {"Gamma"}};
    Sets pred{{"Alpha"}, {"Beta"}, {"Beta", "Gamma"}};
    // Alpha 2/3, Beta 2/3, Gamma 1, Irrelevant (absent everywhere) 0.
    CHECK(it_f1(gold, pred, tax, Subset::All) ==
          doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK(it_f1(gold, pred, tax, Subset::Actionable) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("misaligned inputs rejected") {
    Sets gold{{"Alpha"}};
    CHECK_THROWS_AS(it_f1(gold, {}, tax, Subset::All), ValidationError);
  }
}

TEST_CASE("it_accuracy") {
  SUBCASE("perfect predictions score 1") {
    Taxonomy tax = tiny_taxonomy();
    Sets gold{{"Alpha"}, {"Beta", "Irrelevant"}};
    CHECK(it_accuracy(gold, gold, tax) == 1.0);
  }
  SUBCASE("predicting nothing on a 25-type taxonomy") {
    Taxonomy tax =
        Taxonomy::from_file(testsup::source_path("data/taxonomy.json"));
    REQUIRE(tax.size() == 25);
    Sets gold{{"Request-GoodsServices"}};
    Sets pred{{}};
    CHECK(it_accuracy(gold, pred, tax) == doctest::Approx(0.96));
  }
  SUBCASE("single-type taxonomy can reach 0") {
    Taxonomy tax({"Irrelevant"}, {}, "Irrelevant");
    Sets gold{{"Irrelevant"}};
    Sets pred{{}};
    CHECK(it_accuracy(gold, pred, tax) == 0.0);
  }
  SUBCASE("degenerate inputs rejected") {
    Taxonomy tax = tiny_taxonomy();
    CHECK_THROWS_AS(it_accuracy({}, {}, tax), ValidationError);
  }
}

TEST_CASE("priority_f1_recall") {
  Taxonomy tax = tiny_taxonomy();
  PriorityLevels levels;

  SUBCASE("perfect predictions across all four levels") {
    std::vector<double> gold{0.1, 0.3, 0.6, 0.9};
    Sets its{{"Alpha"}, {"Alpha"}, {"Beta"}, {"Beta"}};
    auto [f1, recall] =
        priority_f1_recall(gold, gold, its, tax, levels, Subset::All);
    CHECK(f1 == 1.0);
    CHECK(recall == 1.0);
  }
  SUBCASE("predicting everything low") {
    std::vector<double> gold{0.1, 0.3, 0.6, 0.9};
    std::vector<double> pred{0.0, 0.0, 0.0, 0.0};
    Sets its{{"Alpha"}, {"Alpha"}, {"Beta"}, {"Beta"}};
    auto [f1, recall] =
        priority_f1_recall(gold, pred, its, tax, levels, Subset::All);
    // Level 0: tp=1 fp=3 -> F1 0.4; higher levels miss entirely.
    CHECK(f1 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(recall == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("actionable subset ignores non-actionable tweets") {
    std::vector<double> gold{0.9, 0.9};
    std::vector<double> pred{0.9, 0.0};
    Sets its{{"Alpha"}, {"Gamma"}};  // only the first is actionable
    auto [f1, recall] =
        priority_f1_recall(gold, pred, its, tax, levels, Subset::Actionable);
    // Only the perfectly scored actionable tweet remains: one populated level.
    CHECK(f1 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(recall == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("an empty actionable subset yields zeros") {
    std::vector<double> gold{0.9};
    Sets its{{"Gamma"}};
    auto [f1, recall] =
        priority_f1_recall(gold, gold, its, tax, levels, Subset::Actionable);
    CHECK(f1 == 0.0);
    CHECK(recall == 0.0);
  }
  SUBCASE("misaligned inputs rejected") {
    CHECK_THROWS_AS(priority_f1_recall({0.5}, {}, {{"Alpha"}}, tax, levels,
                                       Subset::All),
                    ValidationError);
    CHECK_THROWS_AS(priority_f1_recall({0.5}, {0.5}, {}, tax, levels,
                                       Subset::All),
                    ValidationError);
  }
}

TEST_CASE("ndcg_top100") {
  SUBCASE("the ideal ranking scores 1") {
    CHECK(ndcg_top100({1.0, 0.5, 0.25}, {0.9, 0.8, 0.1},
                      {"e1", "e1", "e1"}, {"t1", "t2", "t3"}) == 1.0);
  }
  SUBCASE("hand-computed single swap") {
    // Predicted order t2, t1, t3 against gold 1.0, 0.5, 0.25.
    double dcg = 0.5 + 1.0 / std::log2(3.0) + 0.25 / 2.0;
    double idcg = 1.0 + 0.5 / std::log2(3.0) + 0.25 / 2.0;
    CHECK(ndcg_top100({1.0, 0.5, 0.25}, {0.8, 0.9, 0.1},
                      {"e1", "e1", "e1"}, {"t1", "t2", "t3"}) ==
          doctest::Approx(dcg / idcg).epsilon(1e-12));
  }
  SUBCASE("events average independently; zero-gain events count 1") {
    double mixed = ndcg_top100({1.0, 0.5, 0.0, 0.0}, {0.1, 0.9, 0.5, 0.4},
                               {"e1", "e1", "e2", "e2"},
                               {"t1", "t2", "t3", "t4"});
    double e1 = (0.5 + 1.0 / std::log2(3.0)) / (1.0 + 0.5 / std::log2(3.0));
    CHECK(mixed == doctest::Approx((e1 + 1.0) / 2.0).epsilon(1e-12));
  }
  SUBCASE("prediction ties break by tweet_id") {
    // Both tweets predicted 0.5: tb ranks before tz, so the high-gold tz
    // lands at rank 2.
    double swapped = ndcg_top100({1.0, 0.4}, {0.5, 0.5}, {"e1", "e1"},
                                 {"tz", "tb"});
    double dcg = 0.4 + 1.0 / std::log2(3.0);
    double idcg = 1.0 + 0.4 / std::log2(3.0);
    CHECK(swapped == doctest::Approx(dcg / idcg).epsilon(1e-12));
  }
  SUBCASE("the cutoff truncates both rankings") {
    // With cutoff 1 only the top prediction earns gain.
    CHECK(ndcg_top100({1.0, 0.5}, {0.2, 0.9}, {"e1", "e1"}, {"t1", "t2"}, 1) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("invariant under monotone rescaling of predictions") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> gold, pred, scaled;
      std::vector<std::string> events, ids;
      std::size_t n = 2 + rng.uniform(8);
      for (std::size_t i = 0; i < n; ++i) {
        gold.push_back(rng.real01());
        pred.push_back(rng.real01());
        scaled.push_back(0.1 + pred.back() * 0.5);
        events.push_back(i % 2 == 0 ? "e1" : "e2");
        ids.push_back("t" + std::to_string(i));
      }
      CHECK(ndcg_top100(gold, pred, events, ids) ==
            doctest::Approx(ndcg_top100(gold, scaled, events, ids))
                .epsilon(1e-12));
    }
  }
  SUBCASE("invalid inputs rejected") {
    CHECK_THROWS_AS(ndcg_top100({}, {}, {}, {}), ValidationError);
    CHECK_THROWS_AS(ndcg_top100({1.0}, {0.5}, {""}, {"t1"}), ValidationError);
    CHECK_THROWS_AS(ndcg_top100({1.0}, {0.5}, {"e1"}, {"t1"}, 0),
                    ValidationError);
    CHECK_THROWS_AS(ndcg_top100({1.0, 0.5}, {0.5}, {"e1"}, {"t1"}),
                    ValidationError);
  }
}

TEST_CASE("aggregate_leaderboard") {
  SUBCASE("median and max of nine real nDCG values") {
    std::vector<double> ndcgs{0.4297, 0.6115, 0.5848, 0.6051, 0.5907,
                              0.5951, 0.589,  0.529,  0.5755};
    std::vector<LeaderboardRow> rows;
    for (std::size_t i = 0; i < ndcgs.size(); ++i) {
      MetricReport r;
      r.ndcg = ndcgs[i];
      rows.push_back({"run" + std::to_string(i), r});
    }
    auto board = aggregate_leaderboard(rows);
    CHECK(board.med.ndcg == 0.589);
    CHECK(board.max.ndcg == 0.6115);
    CHECK(board.rows.size() == 9);
  }
  SUBCASE("even counts take the midpoint") {
    auto board = aggregate_leaderboard(
        {{"a", report_of(0.2)}, {"b", report_of(0.4)},
         {"c", report_of(0.8)}, {"d", report_of(0.6)}});
    CHECK(board.med.ndcg == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(board.med.pri_r_all == doctest::Approx(0.57).epsilon(1e-12));
    CHECK(board.max.ndcg == 0.8);
    CHECK(board.max.it_acc == doctest::Approx(0.83).epsilon(1e-12));
  }
  SUBCASE("a single run is its own median and max") {
    auto board = aggregate_leaderboard({{"solo", report_of(0.3)}});
    CHECK(board.med.it_f1_a == board.rows[0].report.it_f1_a);
    CHECK(board.max.pri_f1_all == board.rows[0].report.pri_f1_all);
  }
  SUBCASE("row order does not change the aggregates") {
    std::vector<LeaderboardRow> rows{{"a", report_of(0.1)},
                                     {"b", report_of(0.7)},
                                     {"c", report_of(0.4)}};
    auto forward = aggregate_leaderboard(rows);
    std::reverse(rows.begin(), rows.end());
    auto backward = aggregate_leaderboard(rows);
    CHECK(forward.med.ndcg == backward.med.ndcg);
    CHECK(forward.max.pri_r_a == backward.max.pri_r_a);
  }
  CHECK_THROWS_AS(aggregate_leaderboard({}), ValidationError);
}

TEST_CASE("leaderboard formatting") {
  auto board = aggregate_leaderboard(
      {{"alpha", report_of(0.6)}, {"beta", report_of(0.2)}});
  std::string table = format_leaderboard(board);

  CHECK(table.find("nDCG") != std::string::npos);
  CHECK(table.find("Pri R [All]") != std::string::npos);
  CHECK(table.find("alpha") != std::string::npos);
  CHECK(table.find("\nmed") != std::string::npos);
  CHECK(table.find("\nmax") != std::string::npos);
  CHECK(table.find("0.6000") != std::string::npos);
  // Header plus one line per row plus med and max.
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);

  std::string single = format_report("solo", report_of(0.6));
  CHECK(single.find("solo") != std::string::npos);
  CHECK(std::count(single.begin(), single.end(), '\n') == 2);
}

TEST_CASE("metric report json") {
  std::string text = metric_report_json(report_of(0.5));
  auto parsed = nlohmann::json::parse(text);
  CHECK(parsed.size() == 8);
  // Values round-trip exactly, so compare with the same arithmetic the
  // fixture used rather than decimal literals.
  CHECK(parsed["ndcg"] == 0.5);
  CHECK(parsed["it_f1_actionable"] == 0.5 + 0.01);
  CHECK(parsed["it_f1_all"] == 0.5 + 0.02);
  CHECK(parsed["it_accuracy"] == 0.5 + 0.03);
  CHECK(parsed["priority_f1_actionable"] == 0.5 + 0.04);
  CHECK(parsed["priority_f1_all"] == 0.5 + 0.05);
  CHECK(parsed["priority_recall_actionable"] == 0.5 + 0.06);
  CHECK(parsed["priority_recall_all"] == 0.5 + 0.07);
  // Stable key order for byte-identical artifacts.
  CHECK(text.find("\"ndcg\"") < text.find("\"it_f1_actionable\""));
  CHECK(text.find("\"priority_recall_all\"") > text.find("\"priority_f1_all\""));
  CHECK(text.back() == '\n');
}
