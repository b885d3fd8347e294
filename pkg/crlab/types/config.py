from typing import TypedDict, NotRequired

from .common import ExperimentId, Knob


class FamilyDict(TypedDict):
    n: int
    r: str
    box: list[list[float]]
    t_range: list[float]
    center: NotRequired[list[float]]
    boundary_tol: NotRequired[float]
    constants: NotRequired[dict[str, float | str]]
    name: NotRequired[str]


class OutputDict(TypedDict, total=False):
    dir: str
    stem: str


class ExperimentConfigDict(TypedDict):
    experiment: ExperimentId
    family: NotRequired[FamilyDict | str]
    resolution: NotRequired[dict[Knob, int | float]]
    t: NotRequired[list[float]]
    point: NotRequired[list[float] | str]
    seed: NotRequired[int]
    parallel: NotRequired[bool]
    output: NotRequired[OutputDict]
