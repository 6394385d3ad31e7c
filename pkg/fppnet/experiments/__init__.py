"""Training, evaluation, baseline comparison, ablations and studies."""

from .ablation import DEFAULT_GRIDS, AblationAxis, AblationBase, AblationCell, AblationGrid, run_ablation
from .comparison import ComparisonReport, TimingReport, compare_with_mom, time_estimators
from .metrics import EvalReport, MetricSet, Predictor, compute_metrics, evaluate
from .reports import (
    ablation_summary,
    write_ablation,
    write_comparison,
    write_loss_curve,
    write_report,
    write_sampling_study,
    write_trajectory,
)
from .study import (
    EstimatorSummary,
    SamplingStudy,
    TrackingSummary,
    Trajectory,
    sampling_distribution_study,
    simulate_windows,
    summarise,
    track_windows,
)
from .training import DataSplit, LossCurves, TrainResult, held_out_set, split_dataset, train, train_test_sets

__all__ = [
    "AblationAxis",
    "AblationBase",
    "AblationCell",
    "AblationGrid",
    "DEFAULT_GRIDS",
    "run_ablation",
    "ComparisonReport",
    "TimingReport",
    "compare_with_mom",
    "time_estimators",
    "EvalReport",
    "MetricSet",
    "Predictor",
    "compute_metrics",
    "evaluate",
    "ablation_summary",
    "write_ablation",
    "write_comparison",
    "write_loss_curve",
    "write_report",
    "write_sampling_study",
    "write_trajectory",
    "EstimatorSummary",
    "SamplingStudy",
    "TrackingSummary",
    "Trajectory",
    "sampling_distribution_study",
    "simulate_windows",
    "summarise",
    "track_windows",
    "DataSplit",
    "LossCurves",
    "TrainResult",
    "held_out_set",
    "split_dataset",
    "train",
    "train_test_sets",
]
