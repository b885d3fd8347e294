from typing import TYPE_CHECKING, get_args
from numbers import Number

from crlab.dev.testing import BuiltinFamily
from crlab.types.common import ExperimentId, Knob

if TYPE_CHECKING:
    from crlab.types.config import ExperimentConfigDict, FamilyDict


EXPERIMENTS = frozenset(get_args(ExperimentId))
KNOBS = frozenset(get_args(Knob))


def number(value, /):
    assert isinstance(value, Number) and not isinstance(value, bool), "value must be a number"


def gt(value, /, *, threshold: Number):
    number(value)
    assert value > threshold, f"value must be greater than {threshold}"


def string(value, /):
    assert isinstance(value, str), "value must be a string"


def reals(value, /, *, length: int | None = None):
    assert isinstance(value, (list, tuple)), "value must be a list"
    for v in value:
        number(v)
    if length is not None:
        assert len(value) == length, f"value must have {length} entries"


def _invalid(key: str, cause: AssertionError) -> AssertionError:
    error = AssertionError(f"Invalid {key} parameter.")
    inner = getattr(cause, "path", None)
    error.path = key if inner is None else f"{key}.{inner}"
    return error


class BaseValidator:
    """
    Per-key validation by method name

    Keys without a method are rejected with `KeyError`; failed assertions
    are re-raised with the dotted key path in `path`.
    """

    def __call__(self, o: dict, /, **kwargs):
        for key, value in o.items():
            fn = getattr(self, key, None)
            if key.startswith("_") or not callable(fn):
                error = KeyError(key)
                error.path = key
                raise error
            try:
                fn(value, **kwargs.get(key, {}))
            except AssertionError as e:
                raise _invalid(key, e) from e
            except KeyError as e:
                inner = getattr(e, "path", None)
                e.path = key if inner is None else f"{key}.{inner}"
                raise


class FamilyValidator(BaseValidator):
    """Family declaration validator"""

    def __call__(self, o: "FamilyDict", /, **kwargs):
        missing = {"n", "r", "box"} - o.keys()
        assert not missing, f"Missing required parameters: {sorted(missing)}"
        super().__call__(o, **kwargs)
        n = o["n"]
        try:
            assert len(o["box"]) == 2 * n, f"box must have {2 * n} rows"
        except AssertionError as e:
            raise _invalid("box", e) from e
        try:
            reals(o.get("center", [0.0] * 2 * n), length=2 * n)
        except AssertionError as e:
            raise _invalid("center", e) from e

    def n(self, value, /, **kwargs):
        assert value in (1, 2), "n must be 1 or 2"

    def r(self, value, /, **kwargs):
        string(value)
        assert value.strip(), "r must not be empty"

    def box(self, value, /, **kwargs):
        assert isinstance(value, list), "box must be a list of [lo, hi] rows"
        for row in value:
            reals(row, length=2)
            assert row[0] < row[1], "box bounds must be increasing"

    def t_range(self, value, /, **kwargs):
        reals(value, length=2)
        assert 0 <= value[0] <= value[1] <= 1, "t_range must be a subinterval of [0, 1]"

    def center(self, value, /, **kwargs):
        reals(value)

    def boundary_tol(self, value, /, **kwargs):
        gt(value, threshold=0)

    def constants(self, value, /, **kwargs):
        assert isinstance(value, dict), "constants must be an object"
        for name, v in value.items():
            string(name)
            assert isinstance(v, (Number, str)), f"constant {name} must be a number"

    def name(self, value, /, **kwargs):
        string(value)


class ResolutionValidator(BaseValidator):
    """Resolution knobs, all positive"""

    def _knob(self, value, /, **kwargs):
        gt(value, threshold=0)

    def __getattr__(self, key: str):
        if key in KNOBS:
            return self._knob
        raise AttributeError(key)


class OutputValidator(BaseValidator):
    def dir(self, value, /, **kwargs):
        string(value)

    def stem(self, value, /, **kwargs):
        string(value)
        assert "/" not in value, "stem must be a file name"


class Validator(BaseValidator):
    """Experiment configuration validator"""

    def __init__(self) -> None:
        self._family_validator = FamilyValidator()
        self._resolution_validator = ResolutionValidator()
        self._output_validator = OutputValidator()

    def __call__(self, o: "ExperimentConfigDict", /, **kwargs):
        assert "experiment" in o, "Missing required parameters: ['experiment']"
        super().__call__(o, **kwargs)

    def experiment(self, value, /, **kwargs):
        assert value in EXPERIMENTS, f"experiment must be one of {sorted(EXPERIMENTS)}"

    def family(self, value, /, **kwargs):
        if isinstance(value, str):
            assert value.upper() in BuiltinFamily.__members__, f"unknown builtin family {value}"
        else:
            assert isinstance(value, dict), "family must be an object or a builtin name"
            self._family_validator(value)

    def resolution(self, value, /, **kwargs):
        assert isinstance(value, dict), "resolution must be an object"
        self._resolution_validator(value)

    def t(self, value, /, **kwargs):
        reals(value)
        assert value, "t must not be empty"
        assert all(0 <= v <= 1 for v in value), "t values must lie in [0, 1]"

    def point(self, value, /, **kwargs):
        if isinstance(value, str):
            value = [float(v) for v in value.split(",") if v.strip()]
        reals(value)
        assert len(value) in (2, 4), "point must have 2 or 4 real coordinates"

    def seed(self, value, /, **kwargs):
        assert isinstance(value, int) and value >= 0, "seed must be a nonnegative integer"

    def parallel(self, value, /, **kwargs):
        assert isinstance(value, bool), "parallel must be a boolean"

    def output(self, value, /, **kwargs):
        assert isinstance(value, dict), "output must be an object"
        self._output_validator(value)
