#include "crisis/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "json.hpp"

#include "crisis/embedding.hpp"
#include "crisis/error.hpp"
#include "crisis/gnb.hpp"
#include "crisis/hash.hpp"
#include "crisis/json_io.hpp"
#include "crisis/log.hpp"
#include "crisis/mtl.hpp"

namespace crisis {

namespace fs = std::filesystem;

namespace {

bool is_ensemble_kind(PipelineKind kind) {
  return kind == PipelineKind::Ensemble || kind == PipelineKind::EnsemblePost;
}

bool augments(PipelineKind kind) {
  return kind == PipelineKind::MtlEda || kind == PipelineKind::MtlDga ||
         kind == PipelineKind::MtlDgaNla;
}

std::vector<TweetRecord> load_labeled(const std::string& path,
                                      const Taxonomy& taxonomy,
                                      const char* role) {
  std::vector<TweetRecord> records = load_corpus(path, taxonomy);
  for (const auto& record : records) {
    if (!record.gold_its.has_value() || !record.gold_priority.has_value()) {
      throw ValidationError(std::string(role) + " tweet '" + record.tweet_id +
                            "' lacks gold labels");
    }
  }
  return records;
}

fs::path ensure_run_dir(const RunConfig& config) {
  fs::path run_dir = fs::path(config.output_root) / config.run_name;
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) {
    throw RuntimeError("cannot create run directory '" + run_dir.string() +
                       "': " + ec.message());
  }
  return run_dir;
}

std::vector<AugmentedExample> make_augmented(
    const RunConfig& config, const Taxonomy& taxonomy,
    const std::vector<TweetRecord>& train_part) {
  std::vector<AugmentedExample> augmented;
  if (config.pipeline == PipelineKind::MtlEda) {
    SynonymLexicon lexicon =
        SynonymLexicon::from_file(config.augment.lexicon_path);
    BalanceDeps deps;
    deps.lexicon = &lexicon;
    deps.eda = config.augment.eda;
    Rng rng = Rng(config.train.seed).substream("augmentation");
    augmented = balance(train_part, config.augment.balance_target,
                        BalanceMethod::Eda, deps, rng, taxonomy);
  } else if (config.pipeline == PipelineKind::MtlDga ||
             config.pipeline == PipelineKind::MtlDgaNla) {
    StubGeneratorClient client =
        StubGeneratorClient::from_file(config.augment.responses_path);
    PriorityTable table = build_priority_table(train_part, taxonomy);
    BalanceDeps deps;
    deps.client = &client;
    deps.priorities = &table;
    Rng rng = Rng(config.train.seed).substream("augmentation");
    augmented = balance(train_part, config.augment.balance_target,
                        BalanceMethod::Dga, deps, rng, taxonomy);
  }
  return augmented;
}

}  // namespace

std::vector<AugmentedExample> build_augmentations(const RunConfig& config,
                                                  const Taxonomy& taxonomy) {
  if (!augments(config.pipeline)) {
    throw ValidationError("pipeline '" + to_string(config.pipeline) +
                          "' does not augment");
  }
  std::vector<TweetRecord> full_train =
      load_labeled(config.train_path, taxonomy, "training");
  std::vector<TweetRecord> train_part =
      split_train_dev(full_train, config.train.dev_fraction, config.train.seed)
          .first;
  return make_augmented(config, taxonomy, train_part);
}

void write_augmented_corpus(const std::vector<AugmentedExample>& augmented,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write '" + path + "'");
  for (const auto& ex : augmented) {
    nlohmann::ordered_json j;
    j["id"] = ex.record.tweet_id;
    j["origin"] = ex.origin == AugmentOrigin::Eda ? "eda" : "dga";
    if (ex.source_tweet_id.has_value()) j["source_tweet_id"] = *ex.source_tweet_id;
    if (ex.prompt.has_value()) {
      j["prompt_hash"] = "fnv1a:" + hex64(fnv1a64(*ex.prompt));
      j["prompt"] = *ex.prompt;
    }
    j["target_its"] = *ex.record.gold_its;
    j["gold_priority"] = *ex.record.gold_priority;
    j["text"] = ex.record.text;
    j["epoch_removed"] = ex.epoch_removed;
    out << j.dump() << "\n";
  }
  if (!out) throw RuntimeError("cannot write '" + path + "'");
}

std::string train_model(const RunConfig& config) {
  config.validate();
  if (is_ensemble_kind(config.pipeline)) {
    throw ValidationError("run '" + config.run_name +
                          "' is an ensemble; there is nothing to train");
  }
  Taxonomy taxonomy = Taxonomy::from_file(config.taxonomy_path);
  fs::path run_dir = ensure_run_dir(config);

  if (config.pipeline == PipelineKind::Baseline) {
    std::vector<TweetRecord> train =
        load_labeled(config.train_path, taxonomy, "training");
    HashEmbeddingProvider provider("hash-sbert", config.baseline.embedding_dim,
                                   config.baseline.embedding_seed);
    std::vector<const EmbeddingProvider*> providers{&provider};
    std::vector<std::vector<double>> features;
    std::vector<LabelVector> labels;
    features.reserve(train.size());
    for (const auto& record : train) {
      features.push_back(embed_concat(record.text, providers));
      labels.push_back(binarize(*record.gold_its, taxonomy));
    }
    GaussianNBModel model = fit_gnb(features, labels, taxonomy);
    model.priorities = build_priority_table(train, taxonomy);
    std::string path = (run_dir / "gnb.model").string();
    save_gnb(model, path, taxonomy);
    return path;
  }

  std::vector<TweetRecord> full_train =
      load_labeled(config.train_path, taxonomy, "training");
  auto [train_part, dev_part] = split_train_dev(
      full_train, config.train.dev_fraction, config.train.seed);
  std::vector<AugmentedExample> augmented =
      make_augmented(config, taxonomy, train_part);
  logging::info("run '" + config.run_name + "': " +
                std::to_string(train_part.size()) + " train / " +
                std::to_string(dev_part.size()) + " dev / " +
                std::to_string(augmented.size()) + " augmented");

  MultiTaskModel model = build_model(config.train, taxonomy.size());
  Checkpoint best = train_multitask(
      model, train_part, augmented.empty() ? nullptr : &augmented, dev_part,
      config.train, taxonomy);
  std::string path = (run_dir / "model.ckpt").string();
  save_checkpoint(best, path);

  std::ofstream log_out(run_dir / "train_log.jsonl");
  if (!log_out) {
    throw RuntimeError("cannot write '" +
                       (run_dir / "train_log.jsonl").string() + "'");
  }
  for (const auto& entry : best.log) {
    nlohmann::json j = entry;
    log_out << j.dump() << "\n";
  }
  if (!augmented.empty()) {
    write_augmented_corpus(augmented, (run_dir / "augmented.jsonl").string());
  }
  return path;
}

namespace {

std::vector<Prediction> predict_baseline(const RunConfig& config,
                                         const Taxonomy& taxonomy,
                                         const fs::path& run_dir) {
  fs::path model_path = run_dir / "gnb.model";
  if (!fs::exists(model_path)) {
    throw ValidationError("no model at '" + model_path.string() +
                          "' (train this run first)");
  }
  GaussianNBModel model = load_gnb(model_path.string(), taxonomy);
  if (model.dim != config.baseline.embedding_dim) {
    throw ValidationError("model expects " + std::to_string(model.dim) +
                          "-dim features but the config embeds " +
                          std::to_string(config.baseline.embedding_dim));
  }
  HashEmbeddingProvider provider("hash-sbert", config.baseline.embedding_dim,
                                 config.baseline.embedding_seed);
  std::vector<const EmbeddingProvider*> providers{&provider};
  std::vector<TweetRecord> test = load_corpus(config.test_path, taxonomy);

  std::vector<Prediction> predictions;
  predictions.reserve(test.size());
  for (const auto& record : test) {
    GnbPrediction p =
        predict_gnb(model, embed_concat(record.text, providers), taxonomy);
    Prediction pred;
    pred.tweet_id = record.tweet_id;
    pred.event_id = record.event_id;
    pred.its = p.its;
    pred.probs = p.posteriors;
    pred.priority = map_priority(p.its, model.priorities);
    predictions.push_back(std::move(pred));
  }
  return predictions;
}

std::vector<Prediction> predict_mtl(const RunConfig& config,
                                    const Taxonomy& taxonomy,
                                    const fs::path& run_dir) {
  fs::path model_path = run_dir / "model.ckpt";
  if (!fs::exists(model_path)) {
    throw ValidationError("no model at '" + model_path.string() +
                          "' (train this run first)");
  }
  Checkpoint ckpt = load_checkpoint(model_path.string());
  MultiTaskModel model = model_from_checkpoint(ckpt, taxonomy);
  std::vector<TweetRecord> test = load_corpus(config.test_path, taxonomy);
  return predict_multitask(model, test, ckpt.config, taxonomy);
}

std::vector<Prediction> run_ensemble(const RunConfig& config,
                                     const Taxonomy& taxonomy) {
  std::vector<std::vector<Prediction>> members;
  for (const auto& name : config.members) {
    fs::path dir = fs::path(config.output_root) / name;
    fs::path runfile = dir / "run.tsv";
    fs::path sidecar = dir / "probs.tsv";
    if (!fs::exists(runfile) || !fs::exists(sidecar)) {
      throw ValidationError("ensemble member '" + name +
                            "' has no artifacts under '" + dir.string() +
                            "' (execute that run first)");
    }
    members.push_back(predictions_from_runfile(
        read_runfile(runfile.string()), read_probs_sidecar(sidecar.string()),
        taxonomy));
  }
  std::vector<Prediction> combined = ensemble_predictions(members, taxonomy);
  if (config.pipeline == PipelineKind::EnsemblePost) {
    for (auto& pred : combined) {
      pred = postprocess_irrelevant(std::move(pred), taxonomy,
                                    config.irrelevant_comparison);
    }
  }
  return combined;
}

RunArtifacts write_artifacts(const RunConfig& config, const Taxonomy& taxonomy,
                             const fs::path& run_dir,
                             const std::vector<Prediction>& predictions) {
  RunFileMeta meta;
  meta.run_name = config.run_name;
  meta.config_hash = config.source_hash;
  meta.taxonomy_hash = taxonomy.hash();
  meta.generated_at = run_timestamp();

  RunArtifacts artifacts;
  artifacts.run_dir = run_dir.string();
  artifacts.runfile_path = (run_dir / "run.tsv").string();
  artifacts.sidecar_path = (run_dir / "probs.tsv").string();
  artifacts.rows = predictions.size();
  write_runfile(predictions, taxonomy, meta, artifacts.runfile_path);
  write_probs_sidecar(predictions, taxonomy, artifacts.sidecar_path);

  // Re-validate what just hit disk against its own header.
  RunFile written = read_runfile(artifacts.runfile_path);
  if (written.meta.config_hash != meta.config_hash ||
      written.meta.taxonomy_hash != meta.taxonomy_hash ||
      written.rows.size() != predictions.size()) {
    throw RuntimeError("run file '" + artifacts.runfile_path +
                       "' failed self-validation after writing");
  }

  nlohmann::ordered_json prov;
  prov["run_name"] = config.run_name;
  prov["pipeline"] = to_string(config.pipeline);
  prov["config"] = "fnv1a:" + hex64(config.source_hash);
  prov["taxonomy"] = "fnv1a:" + hex64(taxonomy.hash());
  prov["rows"] = predictions.size();
  prov["generated_at"] = meta.generated_at;
  if (!config.members.empty()) prov["members"] = config.members;
  std::ofstream prov_out(run_dir / "provenance.json");
  prov_out << prov.dump(2) << "\n";
  if (!prov_out) {
    throw RuntimeError("cannot write '" +
                       (run_dir / "provenance.json").string() + "'");
  }
  return artifacts;
}

}  // namespace

RunArtifacts predict_with_model(const RunConfig& config) {
  config.validate();
  Taxonomy taxonomy = Taxonomy::from_file(config.taxonomy_path);
  fs::path run_dir = ensure_run_dir(config);

  std::vector<Prediction> predictions;
  if (is_ensemble_kind(config.pipeline)) {
    predictions = run_ensemble(config, taxonomy);
  } else if (config.pipeline == PipelineKind::Baseline) {
    predictions = predict_baseline(config, taxonomy, run_dir);
  } else {
    predictions = predict_mtl(config, taxonomy, run_dir);
  }
  RunArtifacts artifacts =
      write_artifacts(config, taxonomy, run_dir, predictions);

  // Score in place when the test corpus carries full gold labels.
  if (!config.test_path.empty()) {
    std::vector<TweetRecord> gold = load_corpus(config.test_path, taxonomy);
    bool labeled = !gold.empty();
    for (const auto& record : gold) {
      if (!record.gold_its.has_value() || !record.gold_priority.has_value()) {
        labeled = false;
        break;
      }
    }
    if (labeled) {
      MetricReport report =
          evaluate_runfile(artifacts.runfile_path, gold, taxonomy);
      std::ofstream json_out(run_dir / "metrics.json");
      json_out << metric_report_json(report);
      std::ofstream text_out(run_dir / "metrics.txt");
      text_out << format_report(config.run_name, report);
      if (!json_out || !text_out) {
        throw RuntimeError("cannot write metrics under '" + run_dir.string() +
                           "'");
      }
    } else {
      logging::info("run '" + config.run_name +
                    "': test corpus has no full gold labels; skipping "
                    "evaluation");
    }
  }
  return artifacts;
}

RunArtifacts execute_run(const RunConfig& config) {
  config.validate();
  if (!is_ensemble_kind(config.pipeline)) train_model(config);
  return predict_with_model(config);
}

MetricReport evaluate_run(const RunFile& run,
                          const std::vector<TweetRecord>& gold,
                          const Taxonomy& taxonomy) {
  if (gold.empty()) throw ValidationError("gold corpus is empty");
  if (run.meta.taxonomy_hash != taxonomy.hash()) {
    throw ValidationError("run '" + run.meta.run_name +
                          "' was produced against a different taxonomy");
  }
  std::map<std::string, const RunRow*> by_tweet;
  for (const auto& row : run.rows) {
    if (!by_tweet.emplace(row.tweet_id, &row).second) {
      throw ValidationError("run '" + run.meta.run_name + "' lists tweet '" +
                            row.tweet_id + "' twice");
    }
  }

  std::vector<std::string> missing;
  for (const auto& record : gold) {
    if (by_tweet.find(record.tweet_id) == by_tweet.end()) {
      missing.push_back(record.tweet_id);
    }
  }
  if (!missing.empty()) {
    std::string listed;
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10);
         ++i) {
      listed += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 10) {
      listed += ", and " + std::to_string(missing.size() - 10) + " more";
    }
    throw ValidationError("run '" + run.meta.run_name + "' is missing " +
                          std::to_string(missing.size()) +
                          " gold tweets: " + listed);
  }
  if (run.rows.size() != gold.size()) {
    for (const auto& row : run.rows) {
      if (std::none_of(gold.begin(), gold.end(), [&](const TweetRecord& r) {
            return r.tweet_id == row.tweet_id;
          })) {
        throw ValidationError("run '" + run.meta.run_name +
                              "' has a row for tweet '" + row.tweet_id +
                              "' that is not in the gold corpus");
      }
    }
  }

  std::vector<std::set<std::string>> gold_sets, pred_sets;
  std::vector<double> gold_pri, pred_pri;
  std::vector<std::string> events, tweet_ids;
  for (const auto& record : gold) {
    if (!record.gold_its.has_value() || !record.gold_priority.has_value()) {
      throw ValidationError("gold tweet '" + record.tweet_id +
                            "' lacks gold labels");
    }
    const RunRow& row = *by_tweet.at(record.tweet_id);
    if (row.event_id != record.event_id) {
      throw ValidationError("tweet '" + record.tweet_id +
                            "' is filed under event '" + row.event_id +
                            "' but gold says '" + record.event_id + "'");
    }
    std::set<std::string> predicted;
    for (const auto& name : row.its) {
      taxonomy.index_of(name);
      predicted.insert(name);
    }
    gold_sets.push_back(*record.gold_its);
    pred_sets.push_back(std::move(predicted));
    gold_pri.push_back(*record.gold_priority);
    pred_pri.push_back(row.priority);
    events.push_back(record.event_id);
    tweet_ids.push_back(record.tweet_id);
  }

  PriorityLevels levels;
  MetricReport report;
  report.ndcg = ndcg_top100(gold_pri, pred_pri, events, tweet_ids);
  report.it_f1_a = it_f1(gold_sets, pred_sets, taxonomy, Subset::Actionable);
  report.it_f1_all = it_f1(gold_sets, pred_sets, taxonomy, Subset::All);
  report.it_acc = it_accuracy(gold_sets, pred_sets, taxonomy);
  auto [pf1_a, pr_a] = priority_f1_recall(gold_pri, pred_pri, gold_sets,
                                          taxonomy, levels, Subset::Actionable);
  auto [pf1_all, pr_all] = priority_f1_recall(gold_pri, pred_pri, gold_sets,
                                              taxonomy, levels, Subset::All);
  report.pri_f1_a = pf1_a;
  report.pri_f1_all = pf1_all;
  report.pri_r_a = pr_a;
  report.pri_r_all = pr_all;
  return report;
}

MetricReport evaluate_runfile(const std::string& path,
                              const std::vector<TweetRecord>& gold,
                              const Taxonomy& taxonomy) {
  return evaluate_run(read_runfile(path), gold, taxonomy);
}

Leaderboard compare_runs(const std::vector<std::string>& runfile_paths,
                         const std::vector<TweetRecord>& gold,
                         const Taxonomy& taxonomy) {
  if (runfile_paths.empty()) {
    throw ValidationError("compare needs at least one run file");
  }
  std::vector<LeaderboardRow> rows;
  for (const auto& path : runfile_paths) {
    RunFile run = read_runfile(path);
    rows.push_back({run.meta.run_name, evaluate_run(run, gold, taxonomy)});
  }
  return aggregate_leaderboard(rows);
}

}  // namespace crisis
