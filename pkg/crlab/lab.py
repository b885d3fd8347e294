from typing import Any, Iterable, Mapping, Optional
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from numbers import Number
from os import cpu_count, environ
from pathlib import Path
from re import fullmatch

from pandas import DataFrame

from crlab import __version__
from crlab.config import (
    BasePreprocessor,
    BaseValidator,
    Decoder,
    Encoder,
    JSONDecoder,
    JSONEncoder,
    Preprocessor,
    Validator,
    decode,
    encode,
    load,
    parse,
)
from crlab.constants import THREADS_ENV
from crlab.convexify import BumpResult, search_bump
from crlab.domain import DomainFamily
from crlab.experiments import ExperimentResult, run_experiment, sweep
from crlab.expr import Node, parse as parse_expr, tokenize
from crlab.models import ExperimentConfig
from crlab.util.convert import to_point


__all__ = ["Lab"]


logger = getLogger(__package__)


def _threads(value: Optional[int]) -> int:
    if value is None:
        value = int(environ.get(THREADS_ENV) or cpu_count() or 1)
    assert value >= 1, "thread count must be positive"
    return value


def _dimension(text: str) -> int:
    """Largest `k` of the variables `zk` in an expression, at least 1"""
    indices = [
        int(m.group(1))
        for token in tokenize(text)
        if token.kind == "name" and (m := fullmatch(r"z([1-9]\d*)", token.text))
    ]
    return max(indices, default=1)


class Lab:
    """
    Experiment runner with injectable configuration codecs

    The worker pool for per-t solves is sized by `CRLAB_THREADS` unless
    `threads` is given, and is shut down when the lab is closed:
    >>> with Lab(threads=1) as lab:
    ...     str(lab.parse("abs2(z1) - 1"))
    'abs2(z1)-1.0'

    Experiments run from a configuration file, a decoded dictionary or a
    parsed `ExperimentConfig`:
    >>> with Lab() as lab:  # doctest: +SKIP
    ...     lab.run("configs/e1.json").passed
    True
    """

    validator: BaseValidator
    preprocessor: BasePreprocessor
    encoder: JSONEncoder
    decoder: JSONDecoder

    def __init__(
        self,
        /,
        threads: Optional[int] = None,
        *,
        validator: Optional[BaseValidator] = None,
        preprocessor: Optional[BasePreprocessor] = None,
        encoder: Optional[JSONEncoder] = None,
        decoder: Optional[JSONDecoder] = None,
    ):
        self.threads = _threads(threads)
        self._executor = None

        self.validator = validator if validator is not None else Validator()
        self.preprocessor = preprocessor if preprocessor is not None else Preprocessor()
        self.encoder = encoder if encoder is not None else Encoder()
        self.decoder = decoder if decoder is not None else Decoder()

    def __repr__(self):
        return f"{self.__class__.__name__}(threads={self.threads})"

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    @property
    def executor(self) -> ThreadPoolExecutor:
        """Worker pool for parallel per-t solves, created on first use"""
        if self._executor is None:
            self._executor = ThreadPoolExecutor(
                max_workers=self.threads, thread_name_prefix=f"{__package__}-{__version__}"
            )
        return self._executor

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    def config(self, source: ExperimentConfig | Mapping | str | Path, /) -> ExperimentConfig:
        """Validated configuration from a model, a decoded mapping or a JSON file"""
        if isinstance(source, ExperimentConfig):
            return source
        if isinstance(source, Mapping):
            return parse(dict(source), validator=self.validator, preprocessor=self.preprocessor)
        return load(
            source, decoder=self.decoder, validator=self.validator, preprocessor=self.preprocessor
        )

    def run(self, source: ExperimentConfig | Mapping | str | Path, /) -> ExperimentResult:
        config = self.config(source)
        return run_experiment(config, executor=self.executor if config.parallel else None)

    def sweep(
        self,
        source: ExperimentConfig | Mapping | str | Path,
        /,
        knob: str,
        values: Iterable[Number],
        *,
        metric: Optional[str] = None,
    ) -> DataFrame:
        config = self.config(source)
        return sweep(
            config, knob, values, metric=metric,
            executor=self.executor if config.parallel else None,
        )

    def family(self, source: DomainFamily | Mapping | str | Path, /) -> DomainFamily:
        """Family from a declaration, a builtin name or a JSON declaration file"""
        if isinstance(source, DomainFamily):
            return source
        if isinstance(source, (str, Path)) and Path(source).is_file():
            source = self.decode(Path(source).read_text(encoding="utf-8"))
        # the experiment id only carries the family through validation
        return self.config({"experiment": "E5", "family": source}).family

    def bump(
        self,
        family: DomainFamily | Mapping | str | Path,
        point,
        /,
        t: float = 0.5,
        **options,
    ) -> BumpResult:
        """Search a certified Grauert bump at a boundary point"""
        return search_bump(self.family(family), t, to_point(point), **options)

    def parse(
        self, text: str, /, n: Optional[int] = None, *, constants: Optional[Mapping[str, Number]] = None
    ) -> Node:
        """Parse and normalize an expression; `n` defaults to the largest variable index"""
        return parse_expr(text, n or _dimension(text), constants=constants)

    def encode(self, o: Any, /) -> str:
        return encode(o, encoder=self.encoder)

    def decode(self, text: str, /) -> dict:
        return decode(text, decoder=self.decoder)
