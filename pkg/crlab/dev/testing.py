from typing import TYPE_CHECKING
from enum import Enum

from crlab.expr import DefiningExpr, parse_defining_function

if TYPE_CHECKING:
    from crlab.domain import DomainFamily
    from crlab.types.config import FamilyDict


__all__ = ["BuiltinFamily", "expanding_ball_exhaustion", "EXPANDING_BALL_CENTER"]


EXPANDING_BALL_CENTER = 0.2


def _box(n: int, half: float) -> list[list[float]]:
    return [[-half, half] for _ in range(2 * n)]


class BuiltinFamily(Enum):
    """Families used by experiments and tests"""

    DISK = {"n": 1, "r": "abs2(z1)-1", "box": _box(1, 1.5), "t_range": [0, 1]}
    SHRINKING_DISK = {
        "n": 1,
        "r": "abs2(z1)-1/(t+1)",
        "box": _box(1, 1.5),
        "t_range": [0, 1],
    }
    SHIFTED_DISK = {
        "n": 1,
        "r": "abs2(z1-0.1*t)-1",
        "box": _box(1, 1.5),
        "t_range": [0, 1],
        "center": [0, 0],
    }
    BALL = {"n": 2, "r": "abs2(z1)+abs2(z2)-1", "box": _box(2, 1.5), "t_range": [0, 1]}
    ELLIPSOID = {
        "n": 2,
        "r": "abs2(z1)+4*abs2(z2)-1",
        "box": _box(2, 1.5),
        "t_range": [0, 1],
    }
    SHIFTED_BALL = {
        "n": 2,
        "r": "abs2(z1-0.1*t)+abs2(z2)-1",
        "box": _box(2, 1.6),
        "t_range": [0, 1],
        "center": [0, 0, 0, 0],
    }
    PERTURBED_BALL = {
        "n": 2,
        "r": "abs2(z1)+abs2(z2)-1+0.1*t*re(z1^2)",
        "box": _box(2, 1.6),
        "t_range": [0, 1],
    }
    QUARTIC = {
        "n": 2,
        "r": "abs2(z1)+abs2(z2)+0.25*abs2(z1)^2+0.1*re(z1^2*z2)-1",
        "box": _box(2, 1.5),
        "t_range": [0, 1],
    }
    NON_PSH = {
        "n": 2,
        "r": "abs2(z1)-2*abs2(z2)-1",
        "box": _box(2, 1.5),
        "t_range": [0, 1],
    }
    # balls of radius 1/t centered at (c, 0)
    EXPANDING_BALL = {
        "n": 2,
        "r": "t^2*(abs2(z1-c)+abs2(z2))-1",
        "box": _box(2, 2.5),
        "t_range": [0.5, 1],
        "center": [EXPANDING_BALL_CENTER, 0, 0, 0],
        "constants": {"c": EXPANDING_BALL_CENTER},
    }

    def declaration(self) -> "FamilyDict":
        d = dict(self.value)
        d.setdefault("name", self.name.lower())
        return d

    def family(self) -> "DomainFamily":
        from crlab.domain import DomainFamily

        return DomainFamily.from_dict(self.declaration())

    @classmethod
    def get(cls, name: str) -> "BuiltinFamily":
        return cls[name.upper()]


def expanding_ball_exhaustion(c: float = EXPANDING_BALL_CENTER) -> DefiningExpr:
    """Plurisubharmonic uniform exhaustion of the radius `1/t` balls"""
    return parse_defining_function(
        "abs2(z1)+abs2(z2)+t^2/(1-t^2*(abs2(z1-c)+abs2(z2)))", 2, constants={"c": c}
    )
