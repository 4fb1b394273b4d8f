"""Landing-position-to-control learning: MLP, training loop, grid evaluation."""

from .mlp import Mlp, Normalizer, OUTPUT_RANGES, sigmoid
from .data import TrainingRow, TrainingSet, build_training_set
from .train import (
    EpochStats,
    TrainConfig,
    TrainingDivergedError,
    TrainResult,
    desk_config,
    full_config,
    read_history_csv,
    train,
    write_history_csv,
)
from .evalgrid import (
    GridEvaluation,
    TargetOutcome,
    evaluate_grid,
    read_grid_report,
    target_grid,
    write_grid_report,
)
from .model_io import load_model, save_model

__all__ = [
    "EpochStats",
    "GridEvaluation",
    "Mlp",
    "Normalizer",
    "OUTPUT_RANGES",
    "TargetOutcome",
    "TrainConfig",
    "TrainResult",
    "TrainingDivergedError",
    "TrainingRow",
    "TrainingSet",
    "build_training_set",
    "desk_config",
    "evaluate_grid",
    "read_grid_report",
    "write_grid_report",
    "full_config",
    "load_model",
    "save_model",
    "sigmoid",
    "target_grid",
    "read_history_csv",
    "train",
    "write_history_csv",
]
