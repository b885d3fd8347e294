from functools import singledispatch

import numpy as np

from crlab import cutoff
from crlab.constants import REAL_TOL
from crlab.exceptions import EvaluationError

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
)


__all__ = ("evaluate", "evaluate_real", "is_real")


def is_real(value, /, tol: float = REAL_TOL) -> np.ndarray:
    value = np.asarray(value)
    return np.abs(value.imag) < tol * np.maximum(1.0, np.abs(value.real))


def evaluate(node: Node, /, z, t=0.0) -> np.ndarray:
    """
    Evaluate an expression at points `z` of shape `(..., n)` and parameter `t`

    `t` is a scalar or broadcasts against `z.shape[:-1]`.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape[:-1]
    t = np.asarray(t, dtype=float)
    out = _value(node, z, t, {})
    return np.array(np.broadcast_to(out, np.broadcast_shapes(shape, t.shape)), dtype=complex)


def evaluate_real(node: Node, /, z, t=0.0) -> np.ndarray:
    """Evaluate a real valued expression, rejecting a nonzero imaginary residue"""
    value = evaluate(node, z, t)
    bad = ~is_real(value)
    if np.any(bad):
        raise EvaluationError(
            "not_real",
            f"expression is not real, max imaginary part {np.max(np.abs(value.imag)):.3e}",
            details={"count": int(np.sum(bad))},
        )
    return value.real


def _value(node: Node, z: np.ndarray, t: np.ndarray, memo: dict):
    try:
        return memo[node]
    except KeyError:
        pass
    out = _eval(node, z, t, memo)
    memo[node] = out
    return out


@singledispatch
def _eval(node, z, t, memo):
    raise NotImplementedError(f"Unsupported node: {type(node)}")


@_eval.register
def _(node: Const, z, t, memo):
    return node.value


@_eval.register
def _(node: Var, z, t, memo):
    return z[..., node.index - 1]


@_eval.register
def _(node: Param, z, t, memo):
    return t


@_eval.register
def _(node: Add, z, t, memo):
    return _value(node.left, z, t, memo) + _value(node.right, z, t, memo)


@_eval.register
def _(node: Sub, z, t, memo):
    return _value(node.left, z, t, memo) - _value(node.right, z, t, memo)


@_eval.register
def _(node: Mul, z, t, memo):
    return _value(node.left, z, t, memo) * _value(node.right, z, t, memo)


def _nonzero(value, node: Node):
    if np.any(np.asarray(value) == 0):
        raise EvaluationError("division_by_zero", f"division by zero in {node}")


@_eval.register
def _(node: Div, z, t, memo):
    den = _value(node.right, z, t, memo)
    _nonzero(den, node.right)
    return _value(node.left, z, t, memo) / den


@_eval.register
def _(node: Pow, z, t, memo):
    base = np.asarray(_value(node.base, z, t, memo), dtype=complex)
    if node.exponent < 0:
        _nonzero(base, node.base)
        return 1 / base ** (-node.exponent)
    return base**node.exponent


@_eval.register
def _(node: Neg, z, t, memo):
    return -_value(node.arg, z, t, memo)


@_eval.register
def _(node: Call, z, t, memo):
    v = np.asarray(_value(node.arg, z, t, memo), dtype=complex)

    match node.func:
        case "conj":
            return np.conj(v)
        case "re":
            return v.real
        case "im":
            return v.imag
        case "abs2":
            return v.real**2 + v.imag**2
        case "exp":
            return np.exp(v)
        case "log":
            if not np.all(is_real(v) & (v.real > 0)):
                raise EvaluationError(
                    "log_domain", f"log of a nonpositive or non-real value in {node}"
                )
            return np.log(v.real)


@_eval.register
def _(node: Profile, z, t, memo):
    v = np.asarray(_value(node.arg, z, t, memo), dtype=complex).real
    fn = cutoff.chi0 if node.kind == "chi0" else cutoff.chi1
    return fn(v, order=node.order)
