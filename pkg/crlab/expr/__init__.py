from typing import Mapping, Optional
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .nodes import (
    Node,
    Const,
    Var,
    Param,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Call,
    Profile,
    ZERO,
    ONE,
    T,
    const,
    var,
    add,
    sub,
    mul,
    div,
    power,
    neg,
    call,
    profile,
    total,
)
from .parser import parse, tokenize
from .printer import to_string
from .evaluate import evaluate, evaluate_real, is_real
from .derivative import Wrt, derivative, derivatives, substitute


__all__ = (
    "DefiningExpr",
    "parse_defining_function",
    "Node",
    "Wrt",
    "parse",
    "tokenize",
    "to_string",
    "evaluate",
    "evaluate_real",
    "derivative",
    "derivatives",
    "substitute",
)


@dataclass(frozen=True, slots=True)
class DefiningExpr:
    """Real valued expression `r(z, t)` over `n` complex variables"""

    root: Node
    n: int

    def __str__(self) -> str:
        return to_string(self.root)

    def __call__(self, z, t=0.0) -> np.ndarray:
        return evaluate_real(self.root, z, t)

    def complex(self, z, t=0.0) -> np.ndarray:
        return evaluate(self.root, z, t)

    def diff(self, /, *wrts: Wrt) -> "DefiningExpr":
        return DefiningExpr(derivatives(self.root, *wrts), self.n)

    def substitute(
        self, /, mapping: Mapping[int, Node], *, t: Optional[Node] = None, n: int | None = None
    ) -> "DefiningExpr":
        return DefiningExpr(substitute(self.root, mapping, t=t), n or self.n)

    def freeze(self, t: float, /) -> "DefiningExpr":
        """Replace the parameter by a constant"""
        return DefiningExpr(substitute(self.root, {}, t=Const(t)), self.n)


def parse_defining_function(
    text: str, /, n: int, *, constants: Optional[Mapping[str, Number]] = None
) -> DefiningExpr:
    """
    Parse the text of a defining function

    >>> r = parse_defining_function("abs2(z1)+abs2(z2)-1", 2)
    >>> float(r([0j, 0j], 0.3))
    -1.0
    """
    return DefiningExpr(parse(text, n, constants=constants), n)
