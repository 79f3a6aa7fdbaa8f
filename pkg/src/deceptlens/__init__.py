"""Explainable deception and disinformation detection.

Pipeline: JSONL corpora -> 17 stylometric features -> gradient-boosted tree
classifier -> Shapley attributions with summary, waterfall, and interaction
reports.
"""

from .corpus import Corpus, HybridSplit, LabeledDocument, load_corpus, make_hybrid_split
from .errors import DataError, ModelFormatError
from .explain import (
    Explanation,
    GlobalSummary,
    InteractionReport,
    WaterfallReport,
    global_summary,
    interaction_report,
    shapley_exact,
    shapley_tree,
    waterfall,
)
from .gbm import TrainConfig, TreeEnsemble, TreeNode, load_model, save_model, train
from .lexfeat import (
    FEATURE_NAMES,
    LexiconSet,
    default_lexicons,
    extract_features,
    featurize_corpus,
    load_lexicons,
    tokenize,
)
from .metrics import MetricsReport, evaluate, evaluate_margins, report_table

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "DataError",
    "Explanation",
    "FEATURE_NAMES",
    "GlobalSummary",
    "HybridSplit",
    "InteractionReport",
    "LabeledDocument",
    "LexiconSet",
    "MetricsReport",
    "ModelFormatError",
    "TrainConfig",
    "TreeEnsemble",
    "TreeNode",
    "WaterfallReport",
    "default_lexicons",
    "evaluate",
    "evaluate_margins",
    "extract_features",
    "featurize_corpus",
    "global_summary",
    "interaction_report",
    "load_corpus",
    "load_lexicons",
    "load_model",
    "make_hybrid_split",
    "report_table",
    "save_model",
    "shapley_exact",
    "shapley_tree",
    "tokenize",
    "train",
    "waterfall",
]
