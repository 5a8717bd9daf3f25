"""Command-line front end: every computation as a reproducible batch command."""

import argparse
import logging
import sys
from collections.abc import Sequence
from enum import StrEnum
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn, TextIO

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src import __version__
from src.core.errors import SpectraError, UnknownCommandError, UsageError, describe_validation_error
from src.core.haar import Word, parse_word
from src.core.levy import Generator, LevyPair, laplace
from src.core.measures import LevyMeasure
from src.core.sphere import Family, SphereKind
from src.services.reports import OutputFormat, Report, ReportService
from src.utils.rational import Rational

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class Command(StrEnum):
    POLY = "poly"
    MOMENTS = "moments"
    HAAR = "haar"
    EBI = "ebi"
    PHI = "phi"
    SPECTRUM = "spectrum"
    SPECDIM = "specdim"
    HEAT_TRACE = "heat-trace"
    CENTRAL = "central"
    VERIFY = "verify"
    SERVE = "serve"


class CliConfig(BaseModel):
    """Validated command-line arguments."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    command: Command
    family: SphereKind | None = None
    n: int = Field(default=3, ge=2)
    s: int | None = Field(default=None, ge=0)
    smax: int | None = Field(default=None, ge=0)
    b: Rational | None = None
    nu: Path | None = None
    t: Rational | None = None
    z: float | None = None
    word: str | None = None
    format: OutputFormat = OutputFormat.PRETTY
    verbose: bool = False

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, value: Any) -> Any:
        if isinstance(value, str):
            return SphereKind.parse(value)
        return value

    @field_validator("t")
    @classmethod
    def _nonnegative_time(cls, value: Fraction | None) -> Fraction | None:
        if value is not None and value < 0:
            raise ValueError("t must be nonnegative")
        return value

    def require_family(self) -> Family:
        if self.family is None:
            raise UsageError(f"{self.command} needs --family (or --model)")
        return Family(self.family, self.n)

    def require_word(self) -> Word:
        if self.word is None:
            raise UsageError(f"{self.command} needs --word")
        return parse_word(self.word, self.require_family())

    def measure(self) -> LevyMeasure:
        return LevyMeasure.load(self.nu) if self.nu is not None else LevyMeasure()

    def generator(self) -> Generator:
        """Generator from --b/--nu; the Laplace operator when neither is given."""
        family = self.require_family()
        if self.b is None and self.nu is None:
            return laplace(family)
        return Generator(family, LevyPair(b=self.b or Fraction(0), nu=self.measure()))


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose errors raise instead of exiting."""

    def error(self, message: str) -> NoReturn:
        if message.startswith("argument command: invalid choice"):
            raise UnknownCommandError(message)
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    """Build the argument parser with one subcommand per computation."""
    common = ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.PRETTY.value)
    common.add_argument("--verbose", action="store_true", help="Log INFO messages on standard error")

    family = ArgumentParser(add_help=False)
    family.add_argument("--family", "--model", dest="family", help="classical, half or free")
    family.add_argument("--N", dest="n", type=int, default=3, help="Ambient dimension N >= 2")

    pair = ArgumentParser(add_help=False)
    pair.add_argument("--b", help="Drift as p/q; Laplace operator b = N-1 when --b and --nu are omitted")
    pair.add_argument("--nu", type=Path, help="Path to a Lévy measure JSON file")

    parser = ArgumentParser(prog="sphere-spectra", description="Exact spectra of Markov semigroups on quantum spheres")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", parents=[common, family], help="Normalized eigen-polynomial q_s")
    p.add_argument("--s", dest="s", type=int, required=True)

    p = sub.add_parser("moments", parents=[common, family], help="Moments of u11")
    p.add_argument("--smax", type=int, default=10)

    for name, text in (("haar", "Haar state of a word"), ("phi", "Idempotent state of a word")):
        p = sub.add_parser(name, parents=[common, family], help=text)
        p.add_argument("--word", required=True, help='e.g. "u11^2 u22^2"')

    p = sub.add_parser("ebi", parents=[common, family], help="Bi-invariant conditional expectation")
    p.add_argument("--word", required=True)
    p.add_argument("--smax", type=int)

    p = sub.add_parser("spectrum", parents=[common, family, pair], help="Multiplicities and eigenvalues")
    p.add_argument("--smax", type=int, default=10)

    p = sub.add_parser("specdim", parents=[common, family, pair], help="Spectral dimension")
    p.add_argument("--z", type=float, help="Also report zeta partial sums at z")
    p.add_argument("--smax", type=int, help="Last degree of the zeta partial sum (default 200); the dimension itself ignores it")

    p = sub.add_parser("heat-trace", parents=[common, family, pair], help="Heat eigenvalues and trace")
    p.add_argument("--t", required=True)
    p.add_argument("--smax", type=int, default=20)

    p = sub.add_parser("central", parents=[common], help="Central semigroup eigenvalues on O_N^+")
    p.add_argument("--N", dest="n", type=int, default=3)
    p.add_argument("--b", default="1")
    p.add_argument("--nu", type=Path, help="Measure on [-N, N] as JSON")
    p.add_argument("--smax", type=int, default=10)

    sub.add_parser("verify", parents=[common], help="Run the invariant suite")
    sub.add_parser("serve", parents=[common], help="Start the HTTP API")
    return parser


def parse_config(argv: Sequence[str] | None) -> CliConfig:
    """Parse and validate arguments.

    Raises:
        UsageError: On unknown commands or missing flags
        ValidationError: On values outside their ranges
    """
    namespace = build_parser().parse_args(argv)
    values = {key: value for key, value in vars(namespace).items() if value is not None}
    return CliConfig.model_validate(values)


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(logging.INFO if verbose else logging.WARNING)


def execute(config: CliConfig, reports: ReportService | None = None) -> Report:
    """Run one command and return its report."""
    reports = reports or ReportService()
    match config.command:
        case Command.POLY:
            return reports.poly(config.require_family(), config.s or 0)
        case Command.MOMENTS:
            return reports.moments(config.require_family(), config.smax or 0)
        case Command.HAAR:
            return reports.haar(config.require_word())
        case Command.EBI:
            return reports.ebi(config.require_word(), config.smax)
        case Command.PHI:
            return reports.phi(config.require_word())
        case Command.SPECTRUM:
            return reports.spectrum(config.generator(), config.smax or 0)
        case Command.SPECDIM:
            return reports.specdim(config.generator(), config.z, config.smax)
        case Command.HEAT_TRACE:
            return reports.heat_trace(config.generator(), config.t or Fraction(0), config.smax or 0)
        case Command.CENTRAL:
            return reports.central(config.n, config.b or Fraction(0), config.measure(), config.smax or 0)
        case Command.VERIFY:
            return reports.verify()
    raise UsageError(f"{config.command} has no report")


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Entry point: exit 0 on success, 1 when verify finds a failure, 2 on any error.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]
        stdout: Stream for the payload
        stderr: Stream for the one-line diagnostic

    Returns:
        Process exit code
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        config = parse_config(argv)
        configure_logging(config.verbose)

        if config.command is Command.SERVE:
            from src.main import serve_api

            serve_api()
            return 0

        report = execute(config)
    except SpectraError as e:
        stderr.write(e.describe() + "\n")
        return 2
    except ValidationError as e:
        stderr.write(describe_validation_error(e) + "\n")
        return 2
    except ValueError as e:
        stderr.write(f"invalid argument: {e}\n")
        return 2

    stdout.write(report.render(config.format))
    return 0 if report.ok else 1
