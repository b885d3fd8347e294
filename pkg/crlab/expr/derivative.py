"""
Exact Wirtinger derivatives and substitution.

`derivative(node, Wrt("z", j))` is d/dz_j, `Wrt("zbar", j)` is d/dz_j-bar and
`Wrt("t")` is d/dt. The rules keep the grammar closed: conjugation swaps the
holomorphic and antiholomorphic directions, and a profile call picks up one
more leading `d`.
"""

from typing import Literal, Mapping, Optional
from dataclasses import dataclass
from functools import lru_cache, singledispatch

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
    add,
    sub,
    mul,
    div,
    power,
    neg,
    call,
    profile,
)


__all__ = ("Wrt", "derivative", "derivatives", "substitute")


@dataclass(frozen=True, slots=True)
class Wrt:
    kind: Literal["z", "zbar", "t"]
    index: int = 0

    def conjugate(self) -> "Wrt":
        match self.kind:
            case "z":
                return Wrt("zbar", self.index)
            case "zbar":
                return Wrt("z", self.index)
            case _:
                return self


def _conj(node: Node) -> Node:
    return call("conj", node)


@lru_cache(maxsize=4096)
def derivative(node: Node, wrt: Wrt, /) -> Node:
    """Symbolic derivative, cached per `(node, wrt)`"""
    return _derive(node, wrt)


def derivatives(node: Node, /, *wrts: Wrt) -> Node:
    for wrt in wrts:
        node = derivative(node, wrt)
    return node


@singledispatch
def _derive(node, wrt):
    raise NotImplementedError(f"Unsupported node: {type(node)}")


@_derive.register
def _(node: Const, wrt):
    return ZERO


@_derive.register
def _(node: Var, wrt):
    return ONE if wrt.kind == "z" and wrt.index == node.index else ZERO


@_derive.register
def _(node: Param, wrt):
    return ONE if wrt.kind == "t" else ZERO


@_derive.register
def _(node: Add, wrt):
    return add(derivative(node.left, wrt), derivative(node.right, wrt))


@_derive.register
def _(node: Sub, wrt):
    return sub(derivative(node.left, wrt), derivative(node.right, wrt))


@_derive.register
def _(node: Neg, wrt):
    return neg(derivative(node.arg, wrt))


@_derive.register
def _(node: Mul, wrt):
    a, b = node.left, node.right
    return add(mul(derivative(a, wrt), b), mul(a, derivative(b, wrt)))


@_derive.register
def _(node: Div, wrt):
    a, b = node.left, node.right
    da, db = derivative(a, wrt), derivative(b, wrt)
    if db == ZERO:
        return div(da, b)
    return div(sub(mul(da, b), mul(a, db)), power(b, 2))


@_derive.register
def _(node: Pow, wrt):
    db = derivative(node.base, wrt)
    e = node.exponent
    return mul(mul(Const(e), power(node.base, e - 1)), db)


@_derive.register
def _(node: Call, wrt):
    u = node.arg
    du = derivative(u, wrt)
    # conj(du/dw-bar) = d(conj u)/dw
    dcu = _conj(derivative(u, wrt.conjugate()))

    match node.func:
        case "conj":
            return dcu
        case "re":
            return mul(Const(0.5), add(du, dcu))
        case "im":
            return mul(Const(-0.5j), sub(du, dcu))
        case "abs2":
            return add(mul(du, _conj(u)), mul(u, dcu))
        case "exp":
            return mul(node, du)
        case "log":
            return div(du, u)


@_derive.register
def _(node: Profile, wrt):
    du = derivative(node.arg, wrt)
    return mul(profile(node.kind, node.arg, order=node.order + 1), du)


def substitute(
    node: Node, /, mapping: Mapping[int, Node], *, t: Optional[Node] = None
) -> Node:
    """
    Replace variables `z{k}` by `mapping[k]` and optionally `t` by a node

    Unmapped variables are kept. The result is rebuilt with the smart
    constructors, so constants fold.
    """
    return _substitute(node, dict(mapping), t, {})


def _substitute(node: Node, mapping: dict, t: Optional[Node], memo: dict) -> Node:
    if node in memo:
        return memo[node]

    match node:
        case Var(index=k):
            out = mapping.get(k, node)
        case Param():
            out = node if t is None else t
        case Const():
            out = node
        case Add(left=a, right=b):
            out = add(_substitute(a, mapping, t, memo), _substitute(b, mapping, t, memo))
        case Sub(left=a, right=b):
            out = sub(_substitute(a, mapping, t, memo), _substitute(b, mapping, t, memo))
        case Mul(left=a, right=b):
            out = mul(_substitute(a, mapping, t, memo), _substitute(b, mapping, t, memo))
        case Div(left=a, right=b):
            out = div(_substitute(a, mapping, t, memo), _substitute(b, mapping, t, memo))
        case Pow(base=b, exponent=e):
            out = power(_substitute(b, mapping, t, memo), e)
        case Neg(arg=a):
            out = neg(_substitute(a, mapping, t, memo))
        case Call(func=f, arg=a):
            out = call(f, _substitute(a, mapping, t, memo))
        case Profile(kind=k, order=o, arg=a):
            out = profile(k, _substitute(a, mapping, t, memo), order=o)
        case _:
            raise NotImplementedError(f"Unsupported node: {type(node)}")

    memo[node] = out
    return out
