from functools import singledispatchmethod
from json import JSONEncoder
from pathlib import Path

import numpy as np

from crlab.domain import DomainFamily
from crlab.expr import DefiningExpr
from crlab.convexify import BumpCertificate
from crlab.models import ExperimentConfig, FamilyReport, ReportRow, SolveReport
from crlab.util.convert import to_real


__all__ = ("Encoder", "JSONEncoder", "SEPARATORS")


SEPARATORS = (",", ": ")


class Encoder(JSONEncoder):
    """JSON encoder for configurations, certificates and reports"""

    def __init__(self, *, indent: int | None = 2) -> None:
        # nan and inf stay allowed: failed metrics are reported as nan
        super().__init__(allow_nan=True, indent=indent, separators=SEPARATORS)

    @singledispatchmethod
    def default(self, o):
        return super().default(o)

    @default.register
    def _(self, o: np.ndarray) -> list:
        if np.iscomplexobj(o):
            return to_real(o).tolist()
        return o.tolist()

    @default.register
    def _(self, o: np.generic):
        return o.item()

    @default.register
    def _(self, o: complex) -> list:
        return [o.real, o.imag]

    @default.register
    def _(self, o: Path) -> str:
        return str(o)

    @default.register
    def _(self, o: DefiningExpr) -> str:
        return str(o)

    @default.register
    def _(self, o: DomainFamily) -> dict:
        return o.to_dict()

    @default.register
    def _(self, o: ExperimentConfig) -> dict:
        return o.to_dict()

    @default.register
    def _(self, o: ReportRow) -> dict:
        return o.to_dict()

    @default.register
    def _(self, o: SolveReport) -> dict:
        return o.to_dict()

    @default.register
    def _(self, o: FamilyReport) -> dict:
        return o.to_dict()

    @default.register
    def _(self, o: BumpCertificate) -> dict:
        return o.to_dict()
