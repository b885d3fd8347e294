"""
Expression tree of the defining function language.

Nodes are immutable and hashable, so trees are shared freely between
threads and used as cache keys by the derivative and evaluation code.
Build trees with the smart constructors (`add`, `mul`, ...) rather than
the node classes: they fold constants and drop neutral elements, which
keeps parsed and derived trees in one canonical shape.
"""

from typing import TYPE_CHECKING, Union
from dataclasses import dataclass
from numbers import Number

if TYPE_CHECKING:
    from crlab.types.common import FunctionName, ProfileName


__all__ = (
    "Node",
    "Const",
    "Var",
    "Param",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "Call",
    "Profile",
    "FUNCTIONS",
    "PROFILES",
    "const",
    "var",
    "add",
    "sub",
    "mul",
    "div",
    "power",
    "neg",
    "call",
    "profile",
    "total",
    "ZERO",
    "ONE",
    "T",
)


FUNCTIONS = ("conj", "re", "im", "abs2", "exp", "log")
PROFILES = ("chi0", "chi1")

PREC_ADD = 1
PREC_MUL = 2
PREC_NEG = 3
PREC_POW = 4
PREC_ATOM = 5


class Node:
    """Base expression node"""

    __slots__ = ("_hash",)

    precedence = PREC_ATOM

    def _key(self) -> tuple:
        return tuple(getattr(self, name) for name in self.__match_args__)

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash((type(self).__name__, self._key()))
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented if not isinstance(other, Node) else False
        return hash(self) == hash(other) and self._key() == other._key()

    def __str__(self) -> str:
        from .printer import to_string

        return to_string(self)

    def __add__(self, other):
        return add(self, coerce(other))

    def __radd__(self, other):
        return add(coerce(other), self)

    def __sub__(self, other):
        return sub(self, coerce(other))

    def __rsub__(self, other):
        return sub(coerce(other), self)

    def __mul__(self, other):
        return mul(self, coerce(other))

    def __rmul__(self, other):
        return mul(coerce(other), self)

    def __truediv__(self, other):
        return div(self, coerce(other))

    def __rtruediv__(self, other):
        return div(coerce(other), self)

    def __pow__(self, other: int):
        assert isinstance(other, int), "exponent must be an integer"
        return power(self, other)

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True, eq=False, slots=True)
class Const(Node):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, eq=False, slots=True)
class Var(Node):
    """Complex coordinate `z{index}`, counted from 1"""

    index: int


@dataclass(frozen=True, eq=False, slots=True)
class Param(Node):
    """Family parameter `t`"""


@dataclass(frozen=True, eq=False, slots=True)
class Add(Node):
    left: Node
    right: Node

    precedence = PREC_ADD
    symbol = "+"


@dataclass(frozen=True, eq=False, slots=True)
class Sub(Node):
    left: Node
    right: Node

    precedence = PREC_ADD
    symbol = "-"


@dataclass(frozen=True, eq=False, slots=True)
class Mul(Node):
    left: Node
    right: Node

    precedence = PREC_MUL
    symbol = "*"


@dataclass(frozen=True, eq=False, slots=True)
class Div(Node):
    left: Node
    right: Node

    precedence = PREC_MUL
    symbol = "/"


@dataclass(frozen=True, eq=False, slots=True)
class Pow(Node):
    base: Node
    exponent: int

    precedence = PREC_POW


@dataclass(frozen=True, eq=False, slots=True)
class Neg(Node):
    arg: Node

    # printed as a parenthesised group
    precedence = PREC_ATOM


@dataclass(frozen=True, eq=False, slots=True)
class Call(Node):
    func: "FunctionName"
    arg: Node


@dataclass(frozen=True, eq=False, slots=True)
class Profile(Node):
    """Cutoff profile `chi0`/`chi1` differentiated `order` times"""

    kind: "ProfileName"
    order: int
    arg: Node

    @property
    def name(self) -> str:
        return "d" * self.order + self.kind


ZERO = Const(0)
ONE = Const(1)
T = Param()


def coerce(value: Union[Node, Number], /) -> Node:
    if isinstance(value, Node):
        return value
    elif isinstance(value, Number):
        return Const(complex(value))
    else:
        raise TypeError(f"Cannot use {type(value)} in an expression")


def const(value: Number, /) -> Const:
    return Const(complex(value))


def var(index: int, /) -> Var:
    return Var(index)


def _is(node: Node, value: complex) -> bool:
    return isinstance(node, Const) and node.value == value


def add(left: Node, right: Node, /) -> Node:
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value + right.value)
    if _is(left, 0):
        return right
    if _is(right, 0):
        return left
    return Add(left, right)


def sub(left: Node, right: Node, /) -> Node:
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value - right.value)
    if _is(right, 0):
        return left
    if _is(left, 0):
        return neg(right)
    return Sub(left, right)


def mul(left: Node, right: Node, /) -> Node:
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value * right.value)
    if _is(left, 0) or _is(right, 0):
        return ZERO
    if _is(left, 1):
        return right
    if _is(right, 1):
        return left
    return Mul(left, right)


def div(left: Node, right: Node, /) -> Node:
    if isinstance(right, Const) and right.value == 0:
        # kept symbolic, evaluation reports it
        return Div(left, right)
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value / right.value)
    if _is(left, 0):
        return ZERO
    if _is(right, 1):
        return left
    return Div(left, right)


def power(base: Node, exponent: int, /) -> Node:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const) and (exponent > 0 or base.value != 0):
        return Const(base.value**exponent)
    return Pow(base, exponent)


def neg(arg: Node, /) -> Node:
    if isinstance(arg, Const):
        return Const(-arg.value)
    if isinstance(arg, Neg):
        return arg.arg
    return Neg(arg)


def call(func: "FunctionName", arg: Node, /) -> Node:
    assert func in FUNCTIONS, f"unknown function {func}"
    if isinstance(arg, Const):
        v = arg.value
        match func:
            case "conj":
                return Const(v.conjugate())
            case "re":
                return Const(v.real)
            case "im":
                return Const(v.imag)
            case "abs2":
                return Const(v.real**2 + v.imag**2)
    if func == "conj" and isinstance(arg, Call) and arg.func == "conj":
        return arg.arg
    return Call(func, arg)


def profile(kind: "ProfileName", arg: Node, /, order: int = 0) -> Node:
    assert kind in PROFILES, f"unknown profile {kind}"
    return Profile(kind, order, arg)


def total(nodes, /) -> Node:
    """Sum of nodes folded left to right"""
    result = ZERO
    for node in nodes:
        result = add(result, node)
    return result
