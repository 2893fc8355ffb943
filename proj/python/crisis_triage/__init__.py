"""Crisis tweet triage: information-type classification and priority scoring."""

from ._core import (
    AugmentedExample,
    EncoderConfig,
    GaussianNBModel,
    GnbPrediction,
    HashEmbeddingProvider,
    IrrelevantComparison,
    NLASchedule,
    Prediction,
    PriorityTable,
    Subset,
    SynonymLexicon,
    Taxonomy,
    TrainConfig,
    TriageRuntimeError,
    TweetRecord,
    ValidationError,
    binarize,
    build_dga_prompt,
    build_priority_table,
    compare,
    eda_augment,
    embed_concat,
    ensemble_predictions,
    evaluate,
    execute_run,
    fit_gnb,
    it_accuracy,
    it_f1,
    load_corpus,
    load_gnb,
    lr_at,
    map_priority,
    ndcg_top100,
    nla_threshold,
    postprocess_irrelevant,
    predict_gnb,
    priority_f1_recall,
    save_corpus,
    save_gnb,
    split_train_dev,
    unbinarize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
