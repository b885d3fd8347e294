from typing import Optional, Self, TYPE_CHECKING
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from crlab.domain import DomainFamily
from crlab.util.convert import to_real

if TYPE_CHECKING:
    from crlab.types.common import ExperimentId, Knob
    from crlab.types.config import ExperimentConfigDict


__all__ = ("ExperimentConfig",)


@dataclass(frozen=True, eq=False, slots=True)
class ExperimentConfig:
    """
    Validated experiment configuration

    `family` is `None` when the experiment's own default family applies.
    """

    experiment: "ExperimentId"
    family: Optional[DomainFamily] = None
    resolution: dict = field(default_factory=dict)
    t: Optional[tuple[float, ...]] = None
    point: Optional[np.ndarray] = None
    seed: int = 0
    parallel: bool = False
    output_dir: Optional[Path] = None
    stem: Optional[str] = None

    @classmethod
    def from_dict(cls, data: "ExperimentConfigDict") -> Self:
        """Build from a decoded and preprocessed configuration"""
        output = data.get("output") or {}
        t = data.get("t")
        return cls(
            experiment=data["experiment"],
            family=data.get("family"),
            resolution=dict(data.get("resolution") or {}),
            t=None if t is None else tuple(float(v) for v in t),
            point=data.get("point"),
            seed=int(data.get("seed", 0)),
            parallel=bool(data.get("parallel", False)),
            output_dir=None if output.get("dir") is None else Path(output["dir"]),
            stem=output.get("stem"),
        )

    def to_dict(self) -> "ExperimentConfigDict":
        data = {"experiment": self.experiment, "seed": self.seed, "parallel": self.parallel}
        if self.family is not None:
            data["family"] = self.family.to_dict()
        if self.resolution:
            data["resolution"] = dict(self.resolution)
        if self.t is not None:
            data["t"] = list(self.t)
        if self.point is not None:
            data["point"] = to_real(self.point).tolist()
        output = {}
        if self.output_dir is not None:
            output["dir"] = str(self.output_dir)
        if self.stem is not None:
            output["stem"] = self.stem
        if output:
            data["output"] = output
        return data

    def knob(self, name: "Knob", default):
        return self.resolution.get(name, default)

    def with_knob(self, name: "Knob", value) -> Self:
        return replace(self, resolution={**self.resolution, name: value})

    def t_values(self, default) -> tuple[float, ...]:
        return self.t if self.t is not None else tuple(default)

    @property
    def file_stem(self) -> str:
        return self.stem or self.experiment.lower()
