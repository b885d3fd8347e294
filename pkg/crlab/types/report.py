from typing import TypedDict

from .common import ExperimentId


class ReportRowDict(TypedDict):
    experiment: ExperimentId
    t: float
    resolution: int
    metric: str
    value: float
    tolerance: float
    # pass is a keyword
    passed: bool


class CertificateDict(TypedDict):
    point: list[float]
    t: float
    eps0: float
    eps1: float
    eps2: float
    delta: float
    cstar: float
    min_real_hessian_eig: float
    min_levi_next: float
    separation_ok: bool
    compact_ok: bool
    patch_ok: bool
    violations: list[str]
