"""
Command line

    crlab run --config e1.json
    crlab sweep --config e1.json --knob polar_nodes --values 32,64,128
    crlab bump --family ball.json --point "1,0,0,0" --t 0.5
    crlab parse --expr "abs2(z1)+abs2(z2)-1"

Exit codes: 0 when every report row passes, 1 when a row fails, 2 for
configuration errors, 3 for any other crlab error.
"""

import argparse
from logging import basicConfig, getLogger
from os import environ
from pathlib import Path

from dotenv import load_dotenv

from crlab import __version__
from crlab.constants import LOG_LEVEL_ENV
from crlab.exceptions import ConfigError, CrlabException
from crlab.lab import Lab
from crlab.util.convert import to_point, to_values


logger = getLogger(__package__)


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_ERROR = 3


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="crlab",
        description="Numerical experiments for dbar solution operators on families of domains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--threads", type=int)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one experiment")
    run.add_argument("--config", dest="config_path", type=Path, required=True)

    sweep = commands.add_parser("sweep", help="convergence table over a resolution knob")
    sweep.add_argument("--config", dest="config_path", type=Path, required=True)
    sweep.add_argument("--knob", required=True)
    sweep.add_argument("--values", required=True)
    sweep.add_argument("--metric")

    bump = commands.add_parser("bump", help="certify a Grauert bump at a boundary point")
    bump.add_argument("--family", required=True, help="declaration file or builtin family name")
    bump.add_argument("--point", required=True, help="real coordinates Re z1,Im z1,...")
    bump.add_argument("--t", type=float, default=0.5)

    parse = commands.add_parser("parse", help="print the normalized expression")
    parse.add_argument("--expr", required=True)
    parse.add_argument("--n", type=int)

    return parser.parse_args(argv)


def _log_level(verbose: int) -> str:
    if verbose >= 2:
        return "DEBUG"
    if verbose == 1:
        return "INFO"
    return environ.get(LOG_LEVEL_ENV, "WARNING").upper()


def _option(convert, value: str, name: str):
    try:
        return convert(value)
    except (ValueError, AssertionError) as e:
        raise ConfigError("config_value", f"Invalid --{name} option", details={"path": name}) from e


def _command(lab: Lab, args: argparse.Namespace) -> int:
    match args.command:
        case "run":
            result = lab.run(args.config_path)
            print(result.summary())
            return EXIT_OK if result.passed else EXIT_FAILED
        case "sweep":
            values = _option(to_values, args.values, "values")
            frame = lab.sweep(args.config_path, args.knob, values, metric=args.metric)
            print(frame.to_string(index=False))
            return EXIT_OK if bool(frame["pass"].all()) else EXIT_FAILED
        case "bump":
            result = lab.bump(args.family, _option(to_point, args.point, "point"), t=args.t)
            print(lab.encode(result.certificate))
            return EXIT_OK if result.certificate.passed else EXIT_FAILED
        case "parse":
            print(lab.parse(args.expr, args.n))
            return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    load_dotenv(".env")
    args = _parse_args(argv)
    basicConfig(level=_log_level(args.verbose), format="%(levelname)s %(name)s: %(message)s")

    try:
        with Lab(args.threads) as lab:
            return _command(lab, args)
    except ConfigError as e:
        path = f" at {e.path}" if e.path else ""
        logger.error("configuration error%s: %s", path, e)
        return EXIT_CONFIG
    except CrlabException as e:
        logger.error("%s", e)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
