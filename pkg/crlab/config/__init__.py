from typing import Any, Optional
from json import JSONDecodeError
from pathlib import Path

from crlab.exceptions import ConfigError
from crlab.models.config import ExperimentConfig

from .encoder import Encoder, JSONEncoder, SEPARATORS
from .decoder import Decoder, JSONDecoder
from .preprocess import Preprocessor, BasePreprocessor
from .validation import Validator, BaseValidator, EXPERIMENTS, KNOBS


__all__ = [
    "Encoder",
    "Decoder",
    "Preprocessor",
    "Validator",
    "BasePreprocessor",
    "BaseValidator",
    "EXPERIMENTS",
    "KNOBS",
    "encode",
    "decode",
    "parse",
    "load",
    "dump",
]


def encode(o: Any, /, encoder: Optional[JSONEncoder] = None) -> str:
    """
    Encode configurations, reports and certificates as JSON

    >>> encode({"z": 1 + 2j}, encoder=Encoder(indent=None))
    '{"z": [1.0, 2.0]}'
    """
    if encoder is None:
        encoder = Encoder()
    return encoder.encode(o)


def decode(text: str, /, decoder: Optional[JSONDecoder] = None) -> dict[str, Any]:
    """Decode configuration JSON, reporting syntax errors as `ConfigError`"""
    if decoder is None:
        decoder = Decoder()

    try:
        return decoder.decode(text)
    except JSONDecodeError as e:
        raise ConfigError(
            "config_syntax", e.msg, details={"line": e.lineno, "column": e.colno}
        ) from e
    except ValueError as e:
        raise ConfigError("config_value", str(e), details={"path": _path(e)}) from e


def _path(e: Exception) -> Optional[str]:
    return getattr(e, "path", None) or getattr(e.__cause__, "path", None)


def _reason(e: BaseException) -> str:
    while e.__cause__ is not None:
        e = e.__cause__
    return str(e).strip("'\"")


def parse(
    data: dict,
    /,
    *,
    validator: Optional[BaseValidator] = None,
    preprocessor: Optional[BasePreprocessor] = None,
) -> ExperimentConfig:
    """
    Validate and convert a decoded configuration

    Every failure becomes a `ConfigError` carrying the dotted key path.

    >>> parse({"experiment": "E1", "family": "disk"}).family.name
    'disk'
    """
    if validator is None:
        validator = Validator()
    if preprocessor is None:
        preprocessor = Preprocessor()

    data = dict(data)
    try:
        validator(data)
    except KeyError as e:
        path = _path(e)
        raise ConfigError(
            "config_unknown_key", f"Unknown parameter {path}", details={"path": path}
        ) from e
    except AssertionError as e:
        path = _path(e)
        code = "config_experiment" if path == "experiment" else "config_value"
        raise ConfigError(code, f"{e} {_reason(e)}", details={"path": path}) from e

    try:
        preprocessor(data)
    except Exception as e:
        raise ConfigError(
            "config_value", f"{e} {_reason(e)}", details={"path": _path(e)}
        ) from e

    return ExperimentConfig.from_dict(data)


def load(
    source: str | Path,
    /,
    *,
    decoder: Optional[JSONDecoder] = None,
    validator: Optional[BaseValidator] = None,
    preprocessor: Optional[BasePreprocessor] = None,
) -> ExperimentConfig:
    """Read, validate and convert an experiment configuration file"""
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("config_syntax", f"Cannot read {source}: {e.strerror}") from e
    return parse(decode(text, decoder), validator=validator, preprocessor=preprocessor)


def dump(config: ExperimentConfig, target: str | Path, /, encoder: Optional[JSONEncoder] = None):
    Path(target).write_text(encode(config, encoder) + "\n", encoding="utf-8")
