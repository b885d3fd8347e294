from typing import Callable, Mapping, Optional
from json import JSONDecoder

from crlab.util.convert import to_values


class Decoder(JSONDecoder):
    """
    JSON decoder for experiment configurations

    Values under the keys of `hooks` are converted while decoding, at any
    nesting level, so `"t": "0, 0.5"` and `"t": [0, 0.5]` decode alike.
    """

    hooks: dict[str, Callable]

    def __init__(self, hooks: Optional[Mapping[str, Callable]] = None):
        super().__init__(object_hook=self._object_hook, strict=True)
        self.hooks = {"t": to_values, **(hooks or {})}

    def _object_hook(self, o: dict, /) -> dict:
        for key in o.keys() & self.hooks.keys():
            try:
                o[key] = self.hooks[key](o[key])
            except (TypeError, ValueError, AssertionError, NotImplementedError) as e:
                error = ValueError(f"Failed to convert {key} parameter.")
                error.path = key
                raise error from e

        return o
