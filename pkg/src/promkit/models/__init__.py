from promkit.models.majority import WordStats, fit_majority, predict_majority
from promkit.models.predictions import PredictionSet, export_predictions, import_predictions
from promkit.models.vocab import Vocabulary, PAD, UNK, SEP
from promkit.models.transformer import TransformerConfig, TransformerModel
from promkit.models.training import (
    TrainingConfig,
    load_checkpoint,
    predict_transformer,
    save_checkpoint,
    train_transformer,
)

__all__ = [
    "WordStats",
    "fit_majority",
    "predict_majority",
    "PredictionSet",
    "export_predictions",
    "import_predictions",
    "Vocabulary",
    "PAD",
    "UNK",
    "SEP",
    "TransformerConfig",
    "TransformerModel",
    "TrainingConfig",
    "train_transformer",
    "predict_transformer",
    "save_checkpoint",
    "load_checkpoint",
]
