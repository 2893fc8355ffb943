#include <cmath>
#include <vector>

#include "doctest.h"

#include "crisis/corpus.hpp"
#include "crisis/embedding.hpp"
#include "crisis/error.hpp"
#include "crisis/gnb.hpp"
#include "crisis/rng.hpp"
#include "support.hpp"

using namespace crisis;
using testsup::TempDir;
using testsup::record;
using testsup::tiny_taxonomy;

TEST_CASE("embed_concat") {
  HashEmbeddingProvider p1("s1", 3, 1);
  HashEmbeddingProvider p2("s2", 2, 2);

  SUBCASE("segments in provider order") {
    auto v = embed_concat("x", {&p1, &p2});
    REQUIRE(v.size() == 5);
    auto first = p1.embed("x");
    for (std::size_t i = 0; i < 3; ++i) CHECK(v[i] == first[i]);
    auto second = p2.embed("x");
    for (std::size_t i = 0; i < 2; ++i) CHECK(v[3 + i] == second[i]);
  }
  SUBCASE("single provider is the identity") {
    CHECK(embed_concat("some text", {&p1}) == p1.embed("some text"));
  }
  SUBCASE("frozen golden vector for the seeded stubs") {
    auto v = embed_concat("flood", {&p1, &p2});
    std::vector<double> golden{0.45769595791076356, -1.9609855532839116,
                               0.11193394438447893, -0.97909617833685803,
                               -0.73529545374188232};
    REQUIRE(v.size() == golden.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == golden[i]);
  }
  SUBCASE("no providers rejected") {
    CHECK_THROWS_AS(embed_concat("x", {}), ValidationError);
  }
  SUBCASE("deterministic and dimension-true on varied inputs") {
    for (const char* text : {"", "a", "flood waters", "x y z w"}) {
      auto v = p1.embed(text);
      CHECK(v.size() == 3);
      CHECK(p1.embed(text) == v);
    }
  }
}

namespace {

// Direct-density recomputation of the present/absent posterior, kept
// deliberately naive (no log-space tricks) as an independent oracle.
double oracle_posterior(const GaussianNBModel& model, std::size_t label,
                        const std::vector<double>& x) {
  const GnbLabelStats& s = model.per_label[label];
  auto density = [&](const std::vector<double>& mean,
                     const std::vector<double>& var) {
    double d = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = var[j] + model.smoothing;
      d *= std::exp(-(x[j] - mean[j]) * (x[j] - mean[j]) / (2.0 * v)) /
           std::sqrt(2.0 * M_PI * v);
    }
    return d;
  };
  const double present =
      s.prior_present * density(s.mean_present, s.var_present);
  const double absent =
      (1.0 - s.prior_present) * density(s.mean_absent, s.var_absent);
  return present / (present + absent);
}

std::vector<LabelVector> single_label_bits(const std::vector<int>& present,
                                           std::size_t n_labels) {
  std::vector<LabelVector> labels;
  for (int bit : present) {
    LabelVector v;
    v.bits.assign(n_labels, 0);
    v.bits[0] = static_cast<std::uint8_t>(bit);
    if (!bit) v.bits[n_labels - 1] = 1;  // keep every row labeled
    labels.push_back(v);
  }
  return labels;
}

}  // namespace

TEST_CASE("fit_gnb moments on a two-point problem") {
  Taxonomy tax({"X", "Irrelevant"}, {}, "Irrelevant");
  std::vector<std::vector<double>> features{{0.0}, {2.0}};
  auto labels = single_label_bits({1, 0}, 2);
  auto model = fit_gnb(features, labels, tax);

  const auto& stats = model.per_label[0];
  CHECK(stats.prior_present == 0.5);
  CHECK(stats.mean_present[0] == 0.0);
  CHECK(stats.mean_absent[0] == 2.0);
  CHECK(stats.var_present[0] == 0.0);
  CHECK(stats.var_absent[0] == 0.0);
  // Smoothing derives from the overall feature variance (population var of
  // {0,2} is 1).
  CHECK(model.smoothing == doctest::Approx(1e-9).epsilon(1e-12));
}

TEST_CASE("fit_gnb degenerate classes") {
  Taxonomy tax({"X", "Irrelevant"}, {}, "Irrelevant");
  std::vector<std::vector<double>> features{{0.0}, {1.0}, {2.0}};

  SUBCASE("all present -> always predicted present") {
    auto labels = single_label_bits({1, 1, 1}, 2);
    auto model = fit_gnb(features, labels, tax);
    CHECK(model.per_label[0].degenerate ==
          GnbLabelStats::Degenerate::NoNegatives);
    auto prediction = predict_gnb(model, {5.0}, tax);
    CHECK(prediction.posteriors[0] == 1.0);
    CHECK(prediction.its.count("X") == 1);
  }
  SUBCASE("no positives -> always predicted absent") {
    auto labels = single_label_bits({0, 0, 0}, 2);
    auto model = fit_gnb(features, labels, tax);
    CHECK(model.per_label[0].degenerate ==
          GnbLabelStats::Degenerate::NoPositives);
    auto prediction = predict_gnb(model, {0.0}, tax);
    CHECK(prediction.posteriors[0] == 0.0);
    CHECK(prediction.its.count("X") == 0);
  }
}

TEST_CASE("fit_gnb is invariant under dataset duplication") {
  Taxonomy tax = tiny_taxonomy();
  std::vector<std::vector<double>> features{{0.0, 1.0}, {2.0, 3.0}, {4.0, 0.5}};
  std::vector<LabelVector> labels{binarize({"Alpha"}, tax),
                                  binarize({"Beta"}, tax),
                                  binarize({"Alpha", "Gamma"}, tax)};
  auto doubled_features = features;
  doubled_features.insert(doubled_features.end(), features.begin(),
                          features.end());
  auto doubled_labels = labels;
  doubled_labels.insert(doubled_labels.end(), labels.begin(), labels.end());

  auto a = fit_gnb(features, labels, tax);
  auto b = fit_gnb(doubled_features, doubled_labels, tax);
  CHECK(a.smoothing == b.smoothing);
  for (std::size_t k = 0; k < tax.size(); ++k) {
    CHECK(a.per_label[k].prior_present == b.per_label[k].prior_present);
    CHECK(a.per_label[k].mean_present == b.per_label[k].mean_present);
    CHECK(a.per_label[k].var_present == b.per_label[k].var_present);
  }
}

TEST_CASE("predict_gnb basics") {
  Taxonomy tax({"X", "Irrelevant"}, {}, "Irrelevant");
  std::vector<std::vector<double>> features{{0.0}, {0.2}, {10.0}, {10.2}};
  auto labels = single_label_bits({1, 1, 0, 0}, 2);
  auto model = fit_gnb(features, labels, tax);

  SUBCASE("likelihood dominance at the present mean") {
    auto prediction = predict_gnb(model, {0.1}, tax);
    CHECK(prediction.posteriors[0] > 0.5);
    CHECK(prediction.its.count("X") == 1);
  }
  SUBCASE("equidistant feature with symmetric classes gives 0.5") {
    auto prediction = predict_gnb(model, {5.1}, tax);
    CHECK(prediction.posteriors[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(predict_gnb(model, {0.1, 0.2}, tax), ValidationError);
  }
  SUBCASE("posterior in range and prediction never empty on random input") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> x{rng.real01() * 20.0 - 5.0};
      auto prediction = predict_gnb(model, x, tax);
      CHECK(prediction.posteriors[0] >= 0.0);
      CHECK(prediction.posteriors[0] <= 1.0);
      CHECK_FALSE(prediction.its.empty());
    }
  }
}

TEST_CASE("predict_gnb matches the direct-density oracle") {
  Taxonomy tax = tiny_taxonomy();
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng.uniform(7);   // <= 10 points
    const std::size_t dim = 1 + rng.uniform(3);  // <= 3 features
    std::vector<std::vector<double>> features;
    std::vector<LabelVector> labels;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row;
      for (std::size_t j = 0; j < dim; ++j) {
        row.push_back(rng.real01() * 4.0 - 2.0);
      }
      features.push_back(row);
      LabelVector v;
      v.bits.assign(tax.size(), 0);
      for (std::size_t k = 0; k < 3; ++k) {  // <= 3 substantive ITs
        v.bits[k] = rng.real01() < 0.5 ? 1 : 0;
      }
      if (v.bits == std::vector<std::uint8_t>{0, 0, 0, 0}) v.bits[3] = 1;
      labels.push_back(v);
    }
    auto model = fit_gnb(features, labels, tax);

    std::vector<double> probe;
    for (std::size_t j = 0; j < dim; ++j) {
      probe.push_back(rng.real01() * 4.0 - 2.0);
    }
    auto prediction = predict_gnb(model, probe, tax);
    for (std::size_t k = 0; k < tax.size(); ++k) {
      if (model.per_label[k].degenerate != GnbLabelStats::Degenerate::None) {
        continue;
      }
      const double expected = oracle_posterior(model, k, probe);
      CHECK(prediction.posteriors[k] ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("feature scaling leaves predicted sets unchanged") {
  Taxonomy tax({"X", "Irrelevant"}, {}, "Irrelevant");
  Rng rng(13);
  std::vector<std::vector<double>> features;
  std::vector<LabelVector> labels;
  for (int i = 0; i < 8; ++i) {
    features.push_back({rng.real01() * 3.0, rng.real01() * 3.0});
    LabelVector v;
    v.bits = {static_cast<std::uint8_t>(i % 2),
              static_cast<std::uint8_t>(1 - i % 2)};
    labels.push_back(v);
  }
  auto base = fit_gnb(features, labels, tax);

  const double c = 7.5;
  auto scaled_features = features;
  for (auto& row : scaled_features) {
    for (auto& x : row) x *= c;
  }
  auto scaled = fit_gnb(scaled_features, labels, tax);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> probe{rng.real01() * 3.0, rng.real01() * 3.0};
    std::vector<double> scaled_probe{probe[0] * c, probe[1] * c};
    CHECK(predict_gnb(base, probe, tax).its ==
          predict_gnb(scaled, scaled_probe, tax).its);
  }
}

TEST_CASE("gnb model round-trips through its flat file") {
  TempDir dir;
  Taxonomy tax = tiny_taxonomy();
  Rng rng(3);
  std::vector<std::vector<double>> features;
  std::vector<LabelVector> labels;
  for (int i = 0; i < 6; ++i) {
    features.push_back({rng.real01(), rng.real01()});
    labels.push_back(
        binarize({tax.types()[rng.uniform(tax.size())]}, tax));
  }
  auto model = fit_gnb(features, labels, tax);
  model.priorities.values = {{"Alpha", 0.9}, {"Beta", 0.5},
                             {"Gamma", 0.25}, {"Irrelevant", 0.05}};
  auto path = dir.file("model.gnb");
  save_gnb(model, path, tax);
  auto loaded = load_gnb(path, tax);

  CHECK(loaded.dim == model.dim);
  CHECK(loaded.smoothing == model.smoothing);
  CHECK(loaded.priorities.values == model.priorities.values);
  std::vector<double> probe{0.3, 0.6};
  CHECK(predict_gnb(loaded, probe, tax).posteriors ==
        predict_gnb(model, probe, tax).posteriors);

  Taxonomy other({"Alpha", "Irrelevant"}, {}, "Irrelevant");
  CHECK_THROWS_AS(load_gnb(path, other), ValidationError);
}

TEST_CASE("priority table") {
  Taxonomy tax = tiny_taxonomy();

  SUBCASE("mean per type, absent types default to zero") {
    std::vector<TweetRecord> train{
        record("t1", "e1", "a", {"Alpha"}, 0.2),
        record("t2", "e1", "b", {"Alpha"}, 0.8),
    };
    auto table = build_priority_table(train, tax);
    CHECK(table.values.at("Alpha") == 0.5);
    CHECK(table.values.at("Beta") == 0.0);
    CHECK(table.values.at("Irrelevant") == 0.0);
  }
  SUBCASE("overlapping five-record fixture") {
    std::vector<TweetRecord> train{
        record("t1", "e1", "a", {"Alpha"}, 1.0),
        record("t2", "e1", "b", {"Alpha", "Beta"}, 0.5),
        record("t3", "e1", "c", {"Beta"}, 0.25),
        record("t4", "e1", "d", {"Gamma", "Alpha"}, 0.75),
        record("t5", "e1", "e", {"Irrelevant"}, 0.0),
    };
    auto table = build_priority_table(train, tax);
    CHECK(table.values.at("Alpha") == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(table.values.at("Beta") == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(table.values.at("Gamma") == 0.75);
    CHECK(table.values.at("Irrelevant") == 0.0);
  }
  SUBCASE("records without gold rejected") {
    std::vector<TweetRecord> train{record("t1", "e1", "a")};
    CHECK_THROWS_AS(build_priority_table(train, tax), ValidationError);
  }
}

TEST_CASE("map_priority") {
  PriorityTable table;
  table.values = {{"X", 0.5}, {"Y", 0.9}, {"Irrelevant", 0.05}};
  CHECK(map_priority({"X"}, table) == 0.5);
  CHECK(map_priority({"X", "Y"}, table) == 0.9);
  CHECK(map_priority({"Irrelevant"}, table) == 0.05);
  CHECK_THROWS_AS(map_priority({}, table), ValidationError);
  CHECK_THROWS_AS(map_priority({"Unknown"}, table), ValidationError);

  // Monotone: adding a type never lowers the score.
  CHECK(map_priority({"X", "Irrelevant"}, table) >=
        map_priority({"Irrelevant"}, table));
}
