"""Result files written by experiment runs.

JSON is UTF-8, indented and newline-terminated. CSV files have a header row
and these column orders:

- ``loss_curve.csv``: epoch, train_loss, val_loss
- ``ablation_<axis>.csv``: value, rmse, mae, r2
- ``trajectory.csv``: window, mu_mom, beta_mom, mu_lstm, beta_lstm
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from ..utils.io import write_json_atomic
from ..utils.logging import get_logger
from .ablation import AblationGrid
from .comparison import ComparisonReport
from .metrics import EvalReport
from .study import SamplingStudy, Trajectory
from .training import LossCurves

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g")
    logger.info("csv_written", path=str(path), rows=len(frame))
    return path


def write_report(report: EvalReport, path: PathLike) -> Path:
    return write_json_atomic(path, report.model_dump(mode="json"))


def write_comparison(report: ComparisonReport, path: PathLike) -> Path:
    return write_json_atomic(path, report.to_json())


def write_sampling_study(study: SamplingStudy, path: PathLike) -> Path:
    return write_json_atomic(path, study.model_dump(mode="json"))


def write_loss_curve(curves: LossCurves, path: PathLike) -> Path:
    frame = pd.DataFrame(
        {
            "epoch": range(1, curves.epochs + 1),
            "train_loss": curves.train_loss,
            "val_loss": curves.val_loss,
        }
    )
    return _write_csv(frame, path)


def write_ablation(grid: AblationGrid, out_dir: PathLike) -> Path:
    """Write ``ablation_<axis>.csv`` into ``out_dir``."""
    frame = pd.DataFrame(grid.table(), columns=["value", "rmse", "mae", "r2"])
    return _write_csv(frame, Path(out_dir) / f"ablation_{grid.axis.value}.csv")


def write_trajectory(trajectory: Trajectory, path: PathLike, summary_path: Optional[PathLike] = None) -> Path:
    out = _write_csv(trajectory.frame[Trajectory.COLUMNS], path)
    if summary_path is not None:
        write_json_atomic(summary_path, trajectory.summary.model_dump(mode="json"))
    return out


def ablation_summary(grid: AblationGrid) -> Dict[str, Any]:
    """Trend figures of a sweep, for manifests and logs."""
    return {
        "axis": grid.axis.value,
        "values": grid.values,
        "best_value": grid.best_value(),
        "rmse_spread": grid.rmse_spread(),
        "rmse_non_increasing": grid.rmse_non_increasing(),
    }
