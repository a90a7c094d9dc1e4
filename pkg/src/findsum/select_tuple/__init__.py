"""Salient table-tuple selection as binary classification."""

from findsum.select_tuple.features import (
    DocContext,
    FeatureConfig,
    LabeledTuple,
    featurize,
    featurize_all,
    fit_keywords,
    label_tuples,
    load_vectors,
    read_labeled,
)
from findsum.select_tuple.model import (
    ExternalModel,
    LogisticModel,
    TrainConfig,
    load_model,
    model_from_dict,
    save_model,
    train_classifier,
    train_logistic,
    undersample,
)
from findsum.select_tuple.rank import TopNScore, evaluate_topn, rank_indices, rank_tuples

__all__ = [
    "DocContext", "FeatureConfig", "LabeledTuple", "featurize", "featurize_all", "fit_keywords",
    "label_tuples", "load_vectors", "read_labeled", "ExternalModel", "LogisticModel", "TrainConfig",
    "load_model", "model_from_dict", "save_model", "train_classifier", "train_logistic",
    "undersample", "TopNScore", "evaluate_topn", "rank_indices", "rank_tuples",
]
