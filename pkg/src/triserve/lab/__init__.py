"""Trajectory analysis: cleanup filters, landing estimation, accuracy stats."""

from .filters import (
    PipelineResult,
    apply_filters,
    filter_position_jump,
    filter_rebound,
    filter_region,
    filter_time_jump,
)
from .landing import LandingPoint, NoReboundError, estimate_landing
from .stats import AccuracyStats, BootstrapCI, bootstrap_sigma_diff, compute_stats
from .transform import Pose, transform_to_table_frame
from .experiment import ExperimentResult, run_accuracy_experiment, sweep_parameter
from .io import (
    read_stats_csv,
    read_trajectories,
    read_trajectory_csv,
    write_stats_csv,
    write_trajectories,
)

__all__ = [
    "AccuracyStats",
    "BootstrapCI",
    "ExperimentResult",
    "LandingPoint",
    "NoReboundError",
    "PipelineResult",
    "Pose",
    "apply_filters",
    "bootstrap_sigma_diff",
    "compute_stats",
    "estimate_landing",
    "filter_position_jump",
    "filter_rebound",
    "filter_region",
    "filter_time_jump",
    "read_stats_csv",
    "read_trajectories",
    "read_trajectory_csv",
    "run_accuracy_experiment",
    "sweep_parameter",
    "transform_to_table_frame",
    "write_stats_csv",
    "write_trajectories",
]
