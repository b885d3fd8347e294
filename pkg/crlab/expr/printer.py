from functools import singledispatch

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
    PREC_ATOM,
    PREC_NEG,
)


def format_const(value: complex, /) -> str:
    """
    Print a constant so that the parser reads back the same value

    >>> format_const(complex(-0.5))
    '(-0.5)'
    >>> format_const(2j)
    '2.0i'
    >>> format_const(complex(1, -2))
    '(1.0-2.0i)'
    """
    re, im = value.real, value.imag
    if im == 0:
        return f"({re!r})" if re < 0 else repr(abs(re) if re == 0 else re)
    if re == 0:
        return f"({im!r}i)" if im < 0 else f"{im!r}i"
    sign = "+" if im > 0 else "-"
    return f"({re!r}{sign}{abs(im)!r}i)"


def _wrap(node: Node, bound: int, /) -> str:
    s = to_string(node)
    return f"({s})" if node.precedence < bound else s


@singledispatch
def to_string(node: Node) -> str:
    """Pretty print an expression in the input grammar"""
    raise NotImplementedError(f"Unsupported node: {type(node)}")


@to_string.register
def _(node: Const):
    return format_const(node.value)


@to_string.register
def _(node: Var):
    return f"z{node.index}"


@to_string.register
def _(node: Param):
    return "t"


@to_string.register(Add)
@to_string.register(Sub)
@to_string.register(Mul)
@to_string.register(Div)
def _(node):
    # left associative: equal precedence on the right needs parentheses
    left = _wrap(node.left, node.precedence)
    right = _wrap(node.right, node.precedence + 1)
    return f"{left}{node.symbol}{right}"


@to_string.register
def _(node: Pow):
    return f"{_wrap(node.base, PREC_ATOM)}^{node.exponent}"


@to_string.register
def _(node: Neg):
    return f"(-{_wrap(node.arg, PREC_NEG)})"


@to_string.register
def _(node: Call):
    return f"{node.func}({to_string(node.arg)})"


@to_string.register
def _(node: Profile):
    return f"{node.name}({to_string(node.arg)})"
