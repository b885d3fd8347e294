from typing import Callable, Optional, TYPE_CHECKING
from concurrent.futures import Executor
from dataclasses import dataclass, field

from crlab.exceptions import ConfigError
from crlab.dev.testing import BuiltinFamily
from crlab.domain import DomainFamily
from crlab.models import ExperimentConfig, ReportRow

if TYPE_CHECKING:
    from crlab.types.common import ExperimentId, Knob


__all__ = ("Context", "Experiment", "REGISTRY", "register", "get_experiment")


@dataclass(eq=False, slots=True)
class Context:
    """What a runner sees: the configuration, the resolved family and an optional executor"""

    config: ExperimentConfig
    family: DomainFamily
    executor: Optional[Executor] = None
    artifacts: dict = field(default_factory=dict)

    def knob(self, name: "Knob", default):
        return self.config.knob(name, default)

    def row(self, metric: str, value, tolerance, /, **kwargs) -> ReportRow:
        return ReportRow.check(self.config.experiment, metric, value, tolerance, **kwargs)


@dataclass(frozen=True, slots=True)
class Experiment:
    id: "ExperimentId"
    title: str
    runner: Callable[[Context], list[ReportRow]]
    family: BuiltinFamily
    knobs: dict
    metric: str

    def resolve_family(self, config: ExperimentConfig) -> DomainFamily:
        return config.family if config.family is not None else self.family.family()


REGISTRY: dict[str, Experiment] = {}


def register(
    id: "ExperimentId", title: str, /, *, family: BuiltinFamily, knobs: dict, metric: str
):
    """Register a runner under an experiment id, once"""

    def decorator(runner):
        assert id not in REGISTRY, f"experiment {id} registered twice"
        REGISTRY[id] = Experiment(id, title, runner, family, dict(knobs), metric)
        return runner

    return decorator


def get_experiment(id: str, /) -> Experiment:
    try:
        return REGISTRY[id]
    except KeyError:
        raise ConfigError(
            "config_experiment", f"Unknown experiment {id}", details={"path": "experiment"}
        ) from None
