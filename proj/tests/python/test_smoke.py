"""End-to-end smoke checks over the python surface."""

import json
import math
import pathlib

import pytest

import crisis_triage as ct

ROOT = pathlib.Path(__file__).resolve().parents[2]
DESK_TAXONOMY = ROOT / "data" / "taxonomy_desk.json"
DESK_TRAIN = ROOT / "data" / "desk" / "train.jsonl"
DESK_TEST = ROOT / "data" / "desk" / "test.jsonl"


@pytest.fixture(scope="module")
def taxonomy():
    return ct.Taxonomy.from_file(str(DESK_TAXONOMY))


def test_taxonomy_surface(taxonomy):
    assert len(taxonomy) == 4
    assert "Irrelevant" in taxonomy
    assert taxonomy.is_actionable("Request-SearchAndRescue")
    assert not taxonomy.is_actionable("Irrelevant")
    assert taxonomy.index_of("Report-ServiceAvailable") == 2
    with pytest.raises(ValueError):
        taxonomy.index_of("Not-A-Type")


def test_corpus_roundtrip(taxonomy, tmp_path):
    records = ct.load_corpus(str(DESK_TRAIN), taxonomy)
    assert len(records) == 200
    out = tmp_path / "copy.jsonl"
    ct.save_corpus(str(out), records)
    again = ct.load_corpus(str(out), taxonomy)
    assert [r.tweet_id for r in again] == [r.tweet_id for r in records]
    assert again[0].gold_its == records[0].gold_its

    train, dev = ct.split_train_dev(records, 0.1, seed=7)
    assert len(dev) == 20 and len(train) == 180
    train2, dev2 = ct.split_train_dev(records, 0.1, seed=7)
    assert [r.tweet_id for r in dev2] == [r.tweet_id for r in dev]


def test_binarize_roundtrip(taxonomy):
    bits = ct.binarize({"Irrelevant", "Report-EmergingThreats"}, taxonomy)
    assert bits == [0, 1, 0, 1]
    assert ct.unbinarize(bits, taxonomy) == {"Irrelevant",
                                             "Report-EmergingThreats"}


def test_embedding_deterministic():
    provider = ct.HashEmbeddingProvider("stub", 16, seed=3)
    a = provider.embed("flood waters rising")
    assert len(a) == 16
    assert provider.embed("flood waters rising") == a
    both = ct.embed_concat("flood", [provider, provider])
    assert both == provider.embed("flood") * 2


def test_gnb_learns_separable_labels(taxonomy):
    provider = ct.HashEmbeddingProvider("stub", 32, seed=11)
    records = ct.load_corpus(str(DESK_TRAIN), taxonomy)
    features = [provider.embed(r.text) for r in records]
    gold = [r.gold_its for r in records]
    model = ct.fit_gnb(features, gold, taxonomy)
    hits = sum(
        1 for r in records
        if ct.predict_gnb(model, provider.embed(r.text), taxonomy).its
        & r.gold_its)
    assert hits / len(records) > 0.9


def test_priority_table(taxonomy):
    records = ct.load_corpus(str(DESK_TRAIN), taxonomy)
    table = ct.build_priority_table(records, taxonomy)
    assert set(table.values) == set(taxonomy.types)
    assert table.values["Request-SearchAndRescue"] > table.values["Irrelevant"]
    assert ct.map_priority({"Request-SearchAndRescue", "Irrelevant"},
                           table) == table.values["Request-SearchAndRescue"]


def test_lr_schedule():
    cfg = ct.TrainConfig()
    cfg.peak_lr = 5e-5
    cfg.warmup_fraction = 0.1
    assert ct.lr_at(0, 1000, cfg) == 0.0
    assert ct.lr_at(100, 1000, cfg) == pytest.approx(5e-5)
    assert ct.lr_at(1000, 1000, cfg) == 0.0


def test_eda_deterministic(taxonomy):
    lexicon = ct.SynonymLexicon.from_file(str(ROOT / "data" / "synonyms.tsv"))
    record = ct.TweetRecord("t1", "e1", "flood waters rising near downtown",
                            gold_its={"Report-EmergingThreats"},
                            gold_priority=0.7)
    a = ct.eda_augment(record, seed=42, alpha=0.1, lexicon=lexicon)
    b = ct.eda_augment(record, seed=42, alpha=0.1, lexicon=lexicon)
    assert a.record.text == b.record.text
    assert a.record.gold_its == record.gold_its
    assert a.source_tweet_id == "t1"


def test_dga_prompt_shape(taxonomy):
    ex1 = ct.TweetRecord("t1", "e1", "trapped on roof",
                         gold_its={"Request-SearchAndRescue"})
    ex2 = ct.TweetRecord("t2", "e1", "shelter open downtown",
                         gold_its={"Report-ServiceAvailable"})
    prompt = ct.build_dga_prompt("Report-EmergingThreats", ex1, ex2, taxonomy)
    assert prompt.startswith("Tweet for help in disaster")
    assert prompt.endswith("Content:")
    assert prompt.count("Title:") == 3


def test_nla_threshold_anneals():
    assert ct.nla_threshold(1, 0.9, 0.7, 10) == pytest.approx(0.9)
    assert ct.nla_threshold(10, 0.9, 0.7, 10) == pytest.approx(0.7)


def test_ensemble_and_postprocess(taxonomy):
    a = ct.Prediction("t1", "e1", {"Irrelevant"}, [0.1, 0.2, 0.1, 0.9], 0.2)
    b = ct.Prediction("t1", "e1", {"Report-EmergingThreats"},
                      [0.2, 0.8, 0.1, 0.3], 0.6)
    merged = ct.ensemble_predictions([[a], [b]], taxonomy)[0]
    assert merged.its == {"Irrelevant", "Report-EmergingThreats"}
    assert merged.priority == pytest.approx(0.6)
    assert merged.probs == pytest.approx([0.2, 0.8, 0.1, 0.9])

    cleaned = ct.postprocess_irrelevant(merged, taxonomy)
    assert cleaned.its == {"Irrelevant"}
    assert cleaned.priority == 0.0


def test_metrics_perfect_run(taxonomy):
    gold = [{"Irrelevant"}, {"Report-EmergingThreats"}]
    assert ct.it_f1(gold, gold, taxonomy, ct.Subset.ALL) == pytest.approx(0.5)
    assert ct.it_accuracy(gold, gold, taxonomy) == 1.0
    ndcg = ct.ndcg_top100([0.1, 0.7], [0.1, 0.7], ["e1", "e1"], ["t1", "t2"])
    assert ndcg == pytest.approx(1.0)


def test_execute_and_evaluate(tmp_path):
    config = {
        "run_name": "smoke",
        "pipeline": "mtl",
        "taxonomy": str(DESK_TAXONOMY),
        "train_corpus": str(DESK_TRAIN),
        "test_corpus": str(DESK_TEST),
        "output_root": str(tmp_path / "runs"),
        "training": {
            "epochs": 3,
            "batch_size": 16,
            "peak_lr": 0.05,
            "warmup_fraction": 0.1,
            "dev_fraction": 0.1,
            "w_cls": 1.0,
            "w_reg": 2.0,
            "seed": 9,
            "max_seq_len": 32,
            "encoder": {"vocab_size": 512, "embed_dim": 32, "hidden_dim": 32},
        },
    }
    config_path = tmp_path / "smoke.json"
    config_path.write_text(json.dumps(config))

    artifacts = ct.execute_run(str(config_path))
    assert artifacts["rows"] == 60

    report = ct.evaluate(artifacts["runfile"], str(DESK_TEST),
                         str(DESK_TAXONOMY))
    assert report["it_accuracy"] > 0.9
    assert 0.0 <= report["ndcg"] <= 1.0

    board = ct.compare([artifacts["runfile"]], str(DESK_TEST),
                       str(DESK_TAXONOMY))
    assert board["max"]["it_accuracy"] == report["it_accuracy"]
    assert "smoke" in board["table"]
