from typing import TYPE_CHECKING

from crlab.dev.testing import BuiltinFamily
from crlab.domain import DomainFamily
from crlab.util.convert import to_number, to_point, to_values

if TYPE_CHECKING:
    from crlab.types.config import ExperimentConfigDict


class BasePreprocessor:
    """Per-key conversion of a validated configuration by method name"""

    def __call__(self, o: "ExperimentConfigDict", /, **kwargs):
        for key, value in o.items():
            try:
                fn = getattr(self, key, None)

                if not callable(fn):
                    continue

                o[key] = fn(value, **kwargs.get(key, {}))

            except Exception as e:
                error = ValueError(f"Failed to convert {key} parameter.")
                error.path = key
                raise error from e


class Preprocessor(BasePreprocessor):
    """Experiment configuration preprocessor"""

    def __init__(self) -> None:
        super().__init__()
        self.point = to_point
        self.t = to_values

    def family(self, value, /, **kwargs) -> DomainFamily:
        if isinstance(value, DomainFamily):
            return value
        elif isinstance(value, str):
            return BuiltinFamily.get(value).family()
        elif isinstance(value, dict):
            return DomainFamily.from_dict(value)
        else:
            raise TypeError("Invalid family value type.")

    def resolution(self, value, /, **kwargs) -> dict:
        return {key: to_number(v) for key, v in value.items()}
