"""One-factor-at-a-time sweeps over the training protocol."""

from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..config import ModelConfig, SimulationConfig, TrainSpec, build_config
from ..errors import ConfigError
from ..simulation.dataset import LabeledDataset, generate_dataset
from ..utils.logging import get_logger
from .metrics import EvalReport, evaluate
from .training import train, train_test_sets

logger = get_logger(__name__)


class AblationAxis(str, Enum):
    """Setting varied by a sweep."""

    EPOCHS = "epochs"
    SAMPLES = "samples"
    SEQ_LEN = "seq_len"
    LR = "lr"
    HIDDEN = "hidden"
    BATCH = "batch"


DEFAULT_GRIDS: Dict[AblationAxis, List[Union[int, float]]] = {
    AblationAxis.EPOCHS: [10, 20, 50, 100],
    AblationAxis.SAMPLES: [100, 500, 2000, 10000],
    AblationAxis.SEQ_LEN: [10, 20, 30, 50],
    AblationAxis.LR: [1e-4, 5e-4, 1e-3, 5e-3, 1e-2],
    AblationAxis.HIDDEN: [4, 8, 16, 32, 64],
    AblationAxis.BATCH: [8, 16, 32, 64, 128],
}


class AblationBase(BaseModel):
    """Settings held fixed while one axis varies."""

    model_config = ConfigDict(frozen=True)

    simulation: SimulationConfig = Field(default_factory=lambda: SimulationConfig(n_samples=5000))
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainSpec = Field(default_factory=lambda: TrainSpec(epochs=30))


class AblationCell(BaseModel):
    """One grid point and its test report."""

    model_config = ConfigDict(frozen=True)

    value: Union[int, float]
    report: EvalReport
    best_epoch: int


class AblationGrid(BaseModel):
    """Reports for every value of one axis, in grid order."""

    model_config = ConfigDict(frozen=True)

    axis: AblationAxis
    cells: List[AblationCell]

    @property
    def values(self) -> List[Union[int, float]]:
        return [c.value for c in self.cells]

    @property
    def reports(self) -> List[EvalReport]:
        return [c.report for c in self.cells]

    def table(self) -> List[Dict[str, float]]:
        """Plot-ready rows: value, rmse, mae, r2 (pooled)."""
        return [
            {"value": c.value, "rmse": c.report.overall.rmse, "mae": c.report.overall.mae, "r2": c.report.overall.r2}
            for c in self.cells
        ]

    def best_value(self) -> Union[int, float]:
        """Grid value with the lowest pooled RMSE."""
        return min(self.cells, key=lambda c: c.report.overall.rmse).value

    def rmse_spread(self) -> float:
        rmses = [c.report.overall.rmse for c in self.cells]
        return max(rmses) - min(rmses)

    def rmse_non_increasing(self, tolerance: float = 0.0) -> bool:
        """RMSE never rises by more than ``tolerance`` from one value to the next."""
        rmses = [c.report.overall.rmse for c in self.cells]
        return all(b <= a + tolerance for a, b in zip(rmses, rmses[1:]))


def _cell_configs(
    axis: AblationAxis, value: Union[int, float], base: AblationBase
) -> Tuple[SimulationConfig, ModelConfig, TrainSpec]:
    sim = base.simulation.model_dump()
    model = base.model.model_dump()
    spec = base.train.model_dump()
    if axis is AblationAxis.EPOCHS:
        spec["epochs"] = value
    elif axis is AblationAxis.SAMPLES:
        sim["n_samples"] = value
    elif axis is AblationAxis.SEQ_LEN:
        sim["seq_len"] = value
    elif axis is AblationAxis.LR:
        spec["lr"] = value
    elif axis is AblationAxis.HIDDEN:
        model["hidden_dim"] = value
    elif axis is AblationAxis.BATCH:
        spec["batch_size"] = value
    return (
        build_config(SimulationConfig, **sim),
        build_config(ModelConfig, **model),
        build_config(TrainSpec, **spec),
    )


def _validate_values(axis: AblationAxis, values: Sequence[Union[int, float]]) -> None:
    if not values:
        raise ConfigError(f"no values given for axis '{axis.value}'")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"values for axis '{axis.value}' must be strictly increasing, got {list(values)}")
    if axis is AblationAxis.LR:
        if any(v <= 0 for v in values):
            raise ConfigError("learning rates must be > 0")
    elif any(int(v) != v or v < 1 for v in values):
        raise ConfigError(f"values for axis '{axis.value}' must be positive integers, got {list(values)}")


def run_ablation(
    axis: Union[str, AblationAxis],
    values: Optional[Sequence[Union[int, float]]] = None,
    base_spec: Optional[AblationBase] = None,
    threads: int = 1,
) -> AblationGrid:
    """Train and evaluate once per value of ``axis``.

    Every other setting comes from ``base_spec``. Cells that share a
    simulation configuration share one generated dataset. Cells run on up to
    ``threads`` workers; each owns its seeds, so results do not depend on the
    worker count.

    Raises:
        ConfigError: On an unknown axis or invalid values.
    """
    try:
        axis = AblationAxis(axis)
    except ValueError:
        raise ConfigError(f"unknown ablation axis '{axis}', use one of {[a.value for a in AblationAxis]}") from None
    values = list(DEFAULT_GRIDS[axis] if values is None else values)
    _validate_values(axis, values)
    if axis is not AblationAxis.LR:
        values = [int(v) for v in values]
    base = base_spec or AblationBase()

    configs = [_cell_configs(axis, v, base) for v in values]
    datasets: Dict[str, LabeledDataset] = {}
    for sim, _, _ in configs:
        key = sim.model_dump_json()
        if key not in datasets:
            datasets[key] = generate_dataset(
                sim.n_samples, sim.seq_len, sim.mu_range, sim.beta_range, sim.seed, sim.sampler, sim.threads
            )

    def run_cell(k: int) -> AblationCell:
        sim, model_cfg, spec = configs[k]
        data = datasets[sim.model_dump_json()]
        result = train(spec, model_cfg, data)
        _, test = train_test_sets(data, result.split)
        report = evaluate(
            result.best_model, test, batch_size=spec.batch_size, wall_clock_train=result.wall_clock_train
        )
        logger.info("ablation_cell_finished", axis=axis.value, value=values[k], rmse=report.overall.rmse)
        return AblationCell(value=values[k], report=report, best_epoch=result.curves.best_epoch)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(run_cell, range(len(values))))
    else:
        cells = [run_cell(k) for k in range(len(values))]

    return AblationGrid(axis=axis, cells=cells)
