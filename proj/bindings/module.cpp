// Python surface over the triage core: corpus handling, the baseline and
// multi-task models at the operation level, augmentation, ensembling, the
// track metrics, and whole-config execution.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "crisis/augment.hpp"
#include "crisis/config.hpp"
#include "crisis/corpus.hpp"
#include "crisis/embedding.hpp"
#include "crisis/ensemble.hpp"
#include "crisis/error.hpp"
#include "crisis/gnb.hpp"
#include "crisis/metrics.hpp"
#include "crisis/mtl.hpp"
#include "crisis/pipeline.hpp"
#include "crisis/runfile.hpp"
#include "crisis/taxonomy.hpp"

namespace py = pybind11;
using namespace crisis;

namespace {

py::dict report_dict(const MetricReport& r) {
  py::dict d;
  d["ndcg"] = r.ndcg;
  d["it_f1_actionable"] = r.it_f1_a;
  d["it_f1_all"] = r.it_f1_all;
  d["it_accuracy"] = r.it_acc;
  d["priority_f1_actionable"] = r.pri_f1_a;
  d["priority_f1_all"] = r.pri_f1_all;
  d["priority_recall_actionable"] = r.pri_r_a;
  d["priority_recall_all"] = r.pri_r_all;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Crisis tweet triage core";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<RuntimeError>(m, "TriageRuntimeError",
                                       PyExc_RuntimeError);

  py::class_<Taxonomy>(m, "Taxonomy")
      .def(py::init<std::vector<std::string>, std::vector<std::string>,
                    std::string>(),
           py::arg("types"), py::arg("actionable"), py::arg("irrelevant"))
      .def_static("from_file", &Taxonomy::from_file, py::arg("path"))
      .def_property_readonly("types", &Taxonomy::types)
      .def_property_readonly("actionable", &Taxonomy::actionable)
      .def_property_readonly("irrelevant", &Taxonomy::irrelevant_name)
      .def("__len__", &Taxonomy::size)
      .def("__contains__", &Taxonomy::contains)
      .def("is_actionable", &Taxonomy::is_actionable, py::arg("name"))
      .def("index_of", &Taxonomy::index_of, py::arg("name"))
      .def("hash", &Taxonomy::hash);

  py::class_<TweetRecord>(m, "TweetRecord")
      .def(py::init<>())
      .def(py::init([](std::string tweet_id, std::string event_id,
                       std::string text,
                       std::optional<std::set<std::string>> gold_its,
                       std::optional<double> gold_priority) {
             TweetRecord r;
             r.tweet_id = std::move(tweet_id);
             r.event_id = std::move(event_id);
             r.text = std::move(text);
             r.gold_its = std::move(gold_its);
             r.gold_priority = gold_priority;
             return r;
           }),
           py::arg("tweet_id"), py::arg("event_id"), py::arg("text"),
           py::arg("gold_its") = py::none(),
           py::arg("gold_priority") = py::none())
      .def_readwrite("tweet_id", &TweetRecord::tweet_id)
      .def_readwrite("event_id", &TweetRecord::event_id)
      .def_readwrite("text", &TweetRecord::text)
      .def_readwrite("gold_its", &TweetRecord::gold_its)
      .def_readwrite("gold_priority", &TweetRecord::gold_priority);

  m.def("load_corpus", &load_corpus, py::arg("path"), py::arg("taxonomy"));
  m.def("save_corpus", &save_corpus, py::arg("path"), py::arg("records"));
  m.def("split_train_dev", &split_train_dev, py::arg("records"),
        py::arg("dev_fraction"), py::arg("seed"));
  m.def(
      "binarize",
      [](const std::set<std::string>& gold, const Taxonomy& taxonomy) {
        LabelVector v = binarize(gold, taxonomy);
        return std::vector<int>(v.bits.begin(), v.bits.end());
      },
      py::arg("gold_its"), py::arg("taxonomy"));
  m.def(
      "unbinarize",
      [](const std::vector<int>& bits, const Taxonomy& taxonomy) {
        LabelVector v;
        v.bits.assign(bits.begin(), bits.end());
        return unbinarize(v, taxonomy);
      },
      py::arg("bits"), py::arg("taxonomy"));

  py::class_<HashEmbeddingProvider>(m, "HashEmbeddingProvider")
      .def(py::init<std::string, std::size_t, std::uint64_t>(),
           py::arg("name"), py::arg("dimension"), py::arg("seed"))
      .def_property_readonly("name", &HashEmbeddingProvider::name)
      .def_property_readonly("dimension", &HashEmbeddingProvider::dimension)
      .def("embed", &HashEmbeddingProvider::embed, py::arg("text"));
  m.def(
      "embed_concat",
      [](const std::string& text,
         const std::vector<const HashEmbeddingProvider*>& providers) {
        std::vector<const EmbeddingProvider*> base(providers.begin(),
                                                   providers.end());
        return embed_concat(text, base);
      },
      py::arg("text"), py::arg("providers"));

  py::class_<PriorityTable>(m, "PriorityTable")
      .def(py::init<>())
      .def_readwrite("values", &PriorityTable::values);
  m.def("build_priority_table", &build_priority_table, py::arg("train"),
        py::arg("taxonomy"));
  m.def("map_priority", &map_priority, py::arg("predicted_its"),
        py::arg("table"));

  py::class_<GnbPrediction>(m, "GnbPrediction")
      .def_readonly("posteriors", &GnbPrediction::posteriors)
      .def_readonly("its", &GnbPrediction::its);
  py::class_<GaussianNBModel>(m, "GaussianNBModel")
      .def_readonly("dim", &GaussianNBModel::dim)
      .def_readonly("smoothing", &GaussianNBModel::smoothing)
      .def_readwrite("priorities", &GaussianNBModel::priorities);
  m.def(
      "fit_gnb",
      [](const std::vector<std::vector<double>>& features,
         const std::vector<std::set<std::string>>& gold,
         const Taxonomy& taxonomy) {
        std::vector<LabelVector> labels;
        labels.reserve(gold.size());
        for (const auto& g : gold) labels.push_back(binarize(g, taxonomy));
        return fit_gnb(features, labels, taxonomy);
      },
      py::arg("features"), py::arg("gold_its"), py::arg("taxonomy"));
  m.def("predict_gnb", &predict_gnb, py::arg("model"), py::arg("feature"),
        py::arg("taxonomy"));
  m.def("save_gnb", &save_gnb, py::arg("model"), py::arg("path"),
        py::arg("taxonomy"));
  m.def("load_gnb", &load_gnb, py::arg("path"), py::arg("taxonomy"));

  py::class_<EncoderConfig>(m, "EncoderConfig")
      .def(py::init<>())
      .def_readwrite("vocab_size", &EncoderConfig::vocab_size)
      .def_readwrite("embed_dim", &EncoderConfig::embed_dim)
      .def_readwrite("hidden_dim", &EncoderConfig::hidden_dim);
  py::class_<NLASchedule>(m, "NLASchedule")
      .def(py::init<>())
      .def_readwrite("tau_start", &NLASchedule::tau_start)
      .def_readwrite("tau_end", &NLASchedule::tau_end)
      .def_readwrite("epochs", &NLASchedule::epochs);
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("peak_lr", &TrainConfig::peak_lr)
      .def_readwrite("warmup_fraction", &TrainConfig::warmup_fraction)
      .def_readwrite("dev_fraction", &TrainConfig::dev_fraction)
      .def_readwrite("w_cls", &TrainConfig::w_cls)
      .def_readwrite("w_reg", &TrainConfig::w_reg)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("max_seq_len", &TrainConfig::max_seq_len)
      .def_readwrite("encoder", &TrainConfig::encoder)
      .def_readwrite("nla", &TrainConfig::nla);
  m.def("lr_at", &lr_at, py::arg("step"), py::arg("total_steps"),
        py::arg("config"));

  py::class_<SynonymLexicon>(m, "SynonymLexicon")
      .def(py::init<std::map<std::string, std::vector<std::string>>>(),
           py::arg("entries"))
      .def_static("from_file", &SynonymLexicon::from_file, py::arg("path"))
      .def("__len__", &SynonymLexicon::size)
      .def("has", [](const SynonymLexicon& lex,
                     const std::string& word) { return lex.has(word); })
      .def("synonyms", [](const SynonymLexicon& lex, const std::string& word) {
        return lex.synonyms(word);
      });
  py::class_<AugmentedExample>(m, "AugmentedExample")
      .def_readonly("record", &AugmentedExample::record)
      .def_readonly("source_tweet_id", &AugmentedExample::source_tweet_id)
      .def_readonly("prompt", &AugmentedExample::prompt)
      .def_readonly("alive", &AugmentedExample::alive)
      .def_readonly("epoch_removed", &AugmentedExample::epoch_removed);
  m.def(
      "eda_augment",
      [](const TweetRecord& record, std::uint64_t seed, double alpha,
         const SynonymLexicon& lexicon) {
        EdaParams params;
        params.alpha = alpha;
        return eda_augment(record, seed, params, lexicon);
      },
      py::arg("record"), py::arg("seed"), py::arg("alpha"),
      py::arg("lexicon"));
  m.def("build_dga_prompt", &build_dga_prompt, py::arg("target_it"),
        py::arg("exemplar1"), py::arg("exemplar2"), py::arg("taxonomy"));
  m.def(
      "nla_threshold",
      [](int epoch, double tau_start, double tau_end, int epochs) {
        NLASchedule schedule{tau_start, tau_end, epochs};
        return nla_threshold(epoch, schedule);
      },
      py::arg("epoch"), py::arg("tau_start"), py::arg("tau_end"),
      py::arg("epochs"));

  py::class_<Prediction>(m, "Prediction")
      .def(py::init([](std::string tweet_id, std::string event_id,
                       std::set<std::string> its, std::vector<double> probs,
                       double priority) {
             return Prediction{std::move(tweet_id), std::move(event_id),
                               std::move(its), std::move(probs), priority};
           }),
           py::arg("tweet_id"), py::arg("event_id"), py::arg("its"),
           py::arg("probs"), py::arg("priority"))
      .def_readwrite("tweet_id", &Prediction::tweet_id)
      .def_readwrite("event_id", &Prediction::event_id)
      .def_readwrite("its", &Prediction::its)
      .def_readwrite("probs", &Prediction::probs)
      .def_readwrite("priority", &Prediction::priority);
  m.def("ensemble_predictions", &ensemble_predictions, py::arg("members"),
        py::arg("taxonomy"));
  py::enum_<IrrelevantComparison>(m, "IrrelevantComparison")
      .value("CO_PREDICTED", IrrelevantComparison::CoPredicted)
      .value("ALL_OTHERS", IrrelevantComparison::AllOthers);
  m.def("postprocess_irrelevant", &postprocess_irrelevant,
        py::arg("prediction"), py::arg("taxonomy"),
        py::arg("comparison") = IrrelevantComparison::CoPredicted);

  py::enum_<Subset>(m, "Subset")
      .value("ACTIONABLE", Subset::Actionable)
      .value("ALL", Subset::All);
  m.def("it_f1", &it_f1, py::arg("gold"), py::arg("predicted"),
        py::arg("taxonomy"), py::arg("subset"));
  m.def("it_accuracy", &it_accuracy, py::arg("gold"), py::arg("predicted"),
        py::arg("taxonomy"));
  m.def(
      "priority_f1_recall",
      [](const std::vector<double>& gold_priorities,
         const std::vector<double>& predicted_priorities,
         const std::vector<std::set<std::string>>& gold_its,
         const Taxonomy& taxonomy, Subset subset) {
        return priority_f1_recall(gold_priorities, predicted_priorities,
                                  gold_its, taxonomy, PriorityLevels{},
                                  subset);
      },
      py::arg("gold_priorities"), py::arg("predicted_priorities"),
      py::arg("gold_its"), py::arg("taxonomy"), py::arg("subset"));
  m.def("ndcg_top100", &ndcg_top100, py::arg("gold_priorities"),
        py::arg("predicted_priorities"), py::arg("event_ids"),
        py::arg("tweet_ids"), py::arg("cutoff") = 100);

  m.def(
      "execute_run",
      [](const std::string& config_path) {
        RunConfig config = load_run_config(config_path);
        config.validate();
        RunArtifacts artifacts = execute_run(config);
        py::dict d;
        d["run_dir"] = artifacts.run_dir;
        d["runfile"] = artifacts.runfile_path;
        d["probs"] = artifacts.sidecar_path;
        d["rows"] = artifacts.rows;
        return d;
      },
      py::arg("config_path"));
  m.def(
      "evaluate",
      [](const std::string& runfile_path, const std::string& corpus_path,
         const std::string& taxonomy_path) {
        Taxonomy taxonomy = Taxonomy::from_file(taxonomy_path);
        auto gold = load_corpus(corpus_path, taxonomy);
        return report_dict(evaluate_runfile(runfile_path, gold, taxonomy));
      },
      py::arg("runfile"), py::arg("corpus"), py::arg("taxonomy"));
  m.def(
      "compare",
      [](const std::vector<std::string>& runfile_paths,
         const std::string& corpus_path, const std::string& taxonomy_path) {
        Taxonomy taxonomy = Taxonomy::from_file(taxonomy_path);
        auto gold = load_corpus(corpus_path, taxonomy);
        Leaderboard board = compare_runs(runfile_paths, gold, taxonomy);
        py::dict d;
        py::dict rows;
        for (const auto& row : board.rows) {
          rows[py::str(row.name)] = report_dict(row.report);
        }
        d["rows"] = rows;
        d["med"] = report_dict(board.med);
        d["max"] = report_dict(board.max);
        d["table"] = format_leaderboard(board);
        return d;
      },
      py::arg("runfiles"), py::arg("corpus"), py::arg("taxonomy"));
}
