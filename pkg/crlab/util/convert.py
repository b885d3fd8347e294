from typing import overload, TYPE_CHECKING
from functools import singledispatch
from numbers import Number
from re import fullmatch

import numpy as np


@singledispatch
def to_complex(value, **kwargs) -> complex:
    raise NotImplementedError(f"Unsupported type: {type(value)}")


@to_complex.register
def _(value: Number, **kwargs):
    return complex(value)


@to_complex.register
def _(value: str, **kwargs):
    s = value.strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    # python spelling of the imaginary unit
    return complex(s.replace("i", "j"))


@to_complex.register
def _(value: list, **kwargs):
    re, im = value
    return complex(float(re), float(im))


@singledispatch
def to_point(value, **kwargs) -> np.ndarray:
    """
    Convert a point given by real coordinates `(Re z1, Im z1, Re z2, Im z2, ...)`
    into a complex vector

    >>> to_point("1,0,0,0")
    array([1.+0.j, 0.+0.j])
    """
    raise NotImplementedError(f"Unsupported type: {type(value)}")


@to_point.register
def _(value: np.ndarray, **kwargs):
    if np.iscomplexobj(value):
        return value.astype(complex)
    x = np.asarray(value, dtype=float)
    assert x.shape[-1] % 2 == 0, "point must have an even number of real coordinates"
    return x[..., 0::2] + 1j * x[..., 1::2]


@to_point.register
def _(value: list, **kwargs):
    if any(isinstance(v, (str, complex)) for v in value):
        return np.array([to_complex(v) for v in value], dtype=complex)
    return to_point(np.asarray(value, dtype=float))


@to_point.register
def _(value: tuple, **kwargs):
    return to_point(list(value))


@to_point.register
def _(value: str, **kwargs):
    return to_point([float(v) for v in value.split(",") if v.strip()])


@singledispatch
def to_values(value, **kwargs) -> list:
    """
    Convert a sweep value list

    >>> to_values("32,64,128")
    [32, 64, 128]
    """
    raise NotImplementedError(f"Unsupported type: {type(value)}")


@to_values.register
def _(value: str, **kwargs):
    return [to_number(v.strip()) for v in value.split(",") if v.strip()]


@to_values.register
def _(value: list, **kwargs):
    return [to_number(v) for v in value]


@to_values.register
def _(value: tuple, **kwargs):
    return to_values(list(value))


@singledispatch
def to_number(value, **kwargs) -> int | float:
    raise NotImplementedError(f"Unsupported type: {type(value)}")


@to_number.register
def _(value: int, **kwargs):
    return value


@to_number.register
def _(value: float, **kwargs):
    return int(value) if value.is_integer() else value


@to_number.register
def _(value: str, **kwargs):
    if fullmatch(r"[-+]?\d+", value):
        return int(value)
    return float(value)


def to_real(z: np.ndarray, /) -> np.ndarray:
    """Interleave complex coordinates into `(x1, y1, x2, y2, ...)`"""
    z = np.asarray(z, dtype=complex)
    x = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=float)
    x[..., 0::2] = z.real
    x[..., 1::2] = z.imag
    return x


if TYPE_CHECKING:
    @overload
    def to_complex(value: Number, **kwargs) -> complex:
        ...

    @overload
    def to_complex(value: str, **kwargs) -> complex:
        ...

    @overload
    def to_point(value: str, **kwargs) -> np.ndarray:
        ...

    @overload
    def to_point(value: list, **kwargs) -> np.ndarray:
        ...

    @overload
    def to_values(value: str, **kwargs) -> list:
        ...

    @overload
    def to_values(value: list, **kwargs) -> list:
        ...
