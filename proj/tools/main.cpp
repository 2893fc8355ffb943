// crisis-triage: command-line front end for the triage pipeline.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crisis/config.hpp"
#include "crisis/corpus.hpp"
#include "crisis/error.hpp"
#include "crisis/log.hpp"
#include "crisis/metrics.hpp"
#include "crisis/pipeline.hpp"
#include "crisis/taxonomy.hpp"

namespace {

using crisis::MetricReport;

nlohmann::ordered_json report_to_json(const MetricReport& report) {
  return nlohmann::ordered_json::parse(crisis::metric_report_json(report));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw crisis::RuntimeError("cannot write '" + path + "'");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Crisis-tweet triage: information-type classification and "
               "priority estimation runs"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_corpus, ingest_taxonomy, ingest_out;
  std::string ingest_train_out, ingest_dev_out;
  double ingest_dev_fraction = 0.0;
  std::uint64_t ingest_seed = 0;
  auto* ingest = app.add_subcommand(
      "ingest", "Validate a corpus; optionally normalize and split it");
  ingest->add_option("--corpus", ingest_corpus, "Corpus JSONL")->required();
  ingest->add_option("--taxonomy", ingest_taxonomy, "Taxonomy JSON")
      ->required();
  ingest->add_option("--out", ingest_out, "Write the normalized corpus here");
  ingest->add_option("--dev-fraction", ingest_dev_fraction,
                     "Split off this fraction as a dev set");
  ingest->add_option("--train-out", ingest_train_out,
                     "Train split output (with --dev-fraction)");
  ingest->add_option("--dev-out", ingest_dev_out,
                     "Dev split output (with --dev-fraction)");
  ingest->add_option("--seed", ingest_seed, "Split seed");

  // train / augment / predict / run: config-driven
  std::string config_path;
  auto* train = app.add_subcommand(
      "train", "Train the model a run config describes");
  auto* augment = app.add_subcommand(
      "augment", "Build the augmented examples a run config describes");
  std::string augment_out;
  augment->add_option("--out", augment_out,
                      "Augmented corpus output (default: run dir)");
  auto* predict = app.add_subcommand(
      "predict", "Score the test corpus with a previously trained model");
  auto* ensemble = app.add_subcommand(
      "ensemble", "Combine previously executed member runs");
  auto* run = app.add_subcommand(
      "run", "Execute a run end to end (train + predict, or ensemble)");
  for (CLI::App* sub : {train, augment, predict, ensemble, run}) {
    sub->add_option("--config", config_path, "Run config JSON")->required();
  }

  // evaluate
  std::string eval_run, eval_gold, eval_taxonomy, eval_json;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score one run file against a gold corpus");
  evaluate->add_option("--run", eval_run, "Run file (run.tsv)")->required();
  evaluate->add_option("--gold", eval_gold, "Gold corpus JSONL")->required();
  evaluate->add_option("--taxonomy", eval_taxonomy, "Taxonomy JSON")
      ->required();
  evaluate->add_option("--json", eval_json, "Also write the report as JSON");

  // compare
  std::vector<std::string> compare_files;
  std::string compare_gold, compare_taxonomy, compare_json;
  auto* compare = app.add_subcommand(
      "compare", "Score several run files and aggregate leaderboard-style");
  compare->add_option("--run", compare_files, "Run files")
      ->required()
      ->expected(-1);
  compare->add_option("--gold", compare_gold, "Gold corpus JSONL")->required();
  compare->add_option("--taxonomy", compare_taxonomy, "Taxonomy JSON")
      ->required();
  compare->add_option("--json", compare_json, "Also write the table as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (ingest->parsed()) {
    crisis::Taxonomy taxonomy = crisis::Taxonomy::from_file(ingest_taxonomy);
    std::vector<crisis::TweetRecord> records =
        crisis::load_corpus(ingest_corpus, taxonomy);
    std::size_t labeled = 0;
    std::map<std::string, std::size_t> histogram;
    for (const auto& record : records) {
      if (record.gold_its.has_value()) {
        ++labeled;
        for (const auto& name : *record.gold_its) ++histogram[name];
      }
    }
    std::cout << records.size() << " tweets (" << labeled << " labeled) in '"
              << ingest_corpus << "'\n";
    for (const auto& name : taxonomy.types()) {
      if (auto it = histogram.find(name); it != histogram.end()) {
        std::cout << "  " << name << ": " << it->second << "\n";
      }
    }
    if (!ingest_out.empty()) crisis::save_corpus(ingest_out, records);
    if (ingest_dev_fraction > 0.0) {
      if (ingest_train_out.empty() || ingest_dev_out.empty()) {
        throw crisis::ValidationError(
            "--dev-fraction needs --train-out and --dev-out");
      }
      auto [train_part, dev_part] =
          crisis::split_train_dev(records, ingest_dev_fraction, ingest_seed);
      crisis::save_corpus(ingest_train_out, train_part);
      crisis::save_corpus(ingest_dev_out, dev_part);
      std::cout << "split: " << train_part.size() << " train / "
                << dev_part.size() << " dev\n";
    }
    return 0;
  }

  if (train->parsed()) {
    crisis::RunConfig config = crisis::load_run_config(config_path);
    std::string model_path = crisis::train_model(config);
    std::cout << "trained '" << config.run_name << "' -> " << model_path
              << "\n";
    return 0;
  }

  if (augment->parsed()) {
    crisis::RunConfig config = crisis::load_run_config(config_path);
    crisis::Taxonomy taxonomy =
        crisis::Taxonomy::from_file(config.taxonomy_path);
    std::vector<crisis::AugmentedExample> augmented =
        crisis::build_augmentations(config, taxonomy);
    std::string out = augment_out;
    if (out.empty()) {
      out = config.output_root + "/" + config.run_name + "/augmented.jsonl";
      std::filesystem::create_directories(config.output_root + "/" +
                                          config.run_name);
    }
    crisis::write_augmented_corpus(augmented, out);
    std::cout << augmented.size() << " augmented examples -> " << out << "\n";
    return 0;
  }

  if (predict->parsed() || ensemble->parsed() || run->parsed()) {
    crisis::RunConfig config = crisis::load_run_config(config_path);
    if (ensemble->parsed() && config.pipeline != crisis::PipelineKind::Ensemble &&
        config.pipeline != crisis::PipelineKind::EnsemblePost) {
      throw crisis::ValidationError("config '" + config_path +
                                    "' is not an ensemble run");
    }
    crisis::RunArtifacts artifacts = run->parsed()
                                         ? crisis::execute_run(config)
                                         : crisis::predict_with_model(config);
    std::cout << artifacts.rows << " rows -> " << artifacts.runfile_path
              << "\n";
    return 0;
  }

  if (evaluate->parsed()) {
    crisis::Taxonomy taxonomy = crisis::Taxonomy::from_file(eval_taxonomy);
    std::vector<crisis::TweetRecord> gold =
        crisis::load_corpus(eval_gold, taxonomy);
    crisis::RunFile run_file = crisis::read_runfile(eval_run);
    MetricReport report = crisis::evaluate_run(run_file, gold, taxonomy);
    std::cout << crisis::format_report(run_file.meta.run_name, report);
    if (!eval_json.empty()) {
      write_text(eval_json, crisis::metric_report_json(report));
    }
    return 0;
  }

  if (compare->parsed()) {
    crisis::Taxonomy taxonomy = crisis::Taxonomy::from_file(compare_taxonomy);
    std::vector<crisis::TweetRecord> gold =
        crisis::load_corpus(compare_gold, taxonomy);
    crisis::Leaderboard board =
        crisis::compare_runs(compare_files, gold, taxonomy);
    std::cout << crisis::format_leaderboard(board);
    if (!compare_json.empty()) {
      nlohmann::ordered_json doc;
      for (const auto& row : board.rows) {
        doc["runs"][row.name] = report_to_json(row.report);
      }
      doc["med"] = report_to_json(board.med);
      doc["max"] = report_to_json(board.max);
      write_text(compare_json, doc.dump(2) + "\n");
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const crisis::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const crisis::RuntimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
