"""Report building and rendering shared by the CLI and the HTTP API."""

import csv
import io
import json
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Any

from src.config import limits
from src.core.families import family_q, q_prime_at_one
from src.core.haar import Word, ebi, haar_moment, is_validated_regime, phi
from src.core.levy import Generator, central_eigenvalue, heat_eigenvalues
from src.core.measures import LevyMeasure, MomentFunctional, moment
from src.core.sphere import Family
from src.core.spectral import (
    SpectrumReport,
    heat_trace_partial,
    increment_ratio,
    spectral_dimension,
    spectrum,
    zeta_partial,
)
from src.utils.rational import format_rational

logger = logging.getLogger(__name__)


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"
    PRETTY = "pretty"


def format_float(value: float) -> str:
    """Float text with ``limits.float_digits`` significant digits."""
    return f"{float(value):.{limits.float_digits}g}"


def _json_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format_float(value)
    # keep the literal a JSON float even when it is integral
    return text if any(c in text for c in ".e") else text + ".0"


class FloatDigitsEncoder(json.JSONEncoder):
    """JSON encoder writing floats with ``limits.float_digits`` significant digits."""

    def iterencode(self, o: Any, _one_shot: bool = False) -> Iterator[str]:
        indent = self.indent if self.indent is None or isinstance(self.indent, str) else " " * self.indent
        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        iterencode = json.encoder._make_iterencode(  # type: ignore[attr-defined]
            {} if self.check_circular else None,
            self.default,
            encoder,
            indent,
            _json_float,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return iterencode(o, 0)  # type: ignore[no-any-return]


@dataclass
class Report:
    """A computed result ready to be rendered in any output format.

    ``payload`` is the JSON document (key order is the output order), ``pretty``
    the human-readable text, and ``columns``/``rows`` the CSV table.
    """

    payload: dict[str, Any]
    pretty: str
    columns: tuple[str, ...] = ()
    rows: list[tuple[Any, ...]] = field(default_factory=list)
    ok: bool = True

    def render(self, fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            return json.dumps(self.payload, indent=2, cls=FloatDigitsEncoder) + "\n"
        if fmt is OutputFormat.CSV:
            return self.to_csv()
        return self.pretty + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if self.columns:
            writer.writerow(self.columns)
            writer.writerows(self.rows)
        else:
            writer.writerow(["value"])
            writer.writerow([self.pretty])
        return buffer.getvalue()


def _table(columns: tuple[str, ...], rows: list[tuple[Any, ...]]) -> str:
    cells = [columns, *[tuple(str(c) for c in row) for row in rows]]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in cells)


class ReportService:
    """Builds reports for every computation exposed on the command line."""

    def poly(self, family: Family, s: int) -> Report:
        """Normalized eigen-polynomial q_s and its derivative at 1."""
        q = family_q(family, s)
        derivative = q_prime_at_one(family, s)
        payload = {
            "family": family.kind.value,
            "N": family.n,
            "s": s,
            "coeffs": [format_rational(c) for c in q.coeffs],
            "q": str(q),
            "q_prime_at_one": format_rational(derivative),
        }
        rows = [(k, format_rational(c)) for k, c in enumerate(q.coeffs)]
        return Report(payload, str(q), ("k", "coeff"), rows)

    def moments(self, family: Family, kmax: int) -> Report:
        """Moments m_0..m_kmax of the law of u11."""
        mf = MomentFunctional(family)
        rows = [(k, format_rational(moment(mf, k))) for k in range(kmax + 1)]
        payload = {
            "family": family.kind.value,
            "N": family.n,
            "moments": [{"k": k, "m": m} for k, m in rows],
        }
        return Report(payload, _table(("k", "m"), rows), ("k", "m"), rows)

    def haar(self, word: Word) -> Report:
        """Haar state of a word."""
        value = haar_moment(word)
        payload = {
            "model": word.family.kind.value,
            "N": word.family.n,
            "word": str(word),
            "value": format_rational(value),
            "verified": is_validated_regime(word),
        }
        return Report(payload, format_rational(value))

    def ebi(self, word: Word, smax: int | None = None) -> Report:
        """Bi-invariant conditional expectation of a word."""
        smax = len(word) if smax is None else smax
        poly = ebi(word, smax)
        payload = {
            "model": word.family.kind.value,
            "N": word.family.n,
            "word": str(word),
            "smax": smax,
            "coeffs": [format_rational(c) for c in poly.coeffs],
            "poly": str(poly),
            "verified": is_validated_regime(word),
        }
        rows = [(k, format_rational(c)) for k, c in enumerate(poly.coeffs)]
        return Report(payload, str(poly), ("k", "coeff"), rows)

    def phi(self, word: Word) -> Report:
        """Idempotent state Φ of a word."""
        value = phi(word)
        payload = {
            "model": word.family.kind.value,
            "N": word.family.n,
            "word": str(word),
            "value": format_rational(value),
            "verified": is_validated_regime(word),
        }
        return Report(payload, format_rational(value))

    def spectrum(self, generator: Generator, smax: int) -> Report:
        """Spectrum table (s, m_s, λ_s) for s = 0..smax."""
        document = SpectrumReport(
            family=generator.family.kind,
            n=generator.family.n,
            b=generator.pair.b,
            nu=generator.pair.nu,
            entries=tuple(spectrum(generator, smax)),
        )
        rows = [
            (e.s, str(e.m), format_rational(e.lambda_), format_float(float(e.lambda_)))
            for e in document.entries
        ]
        pretty_rows = [(s, m, lam) for s, m, lam, _ in rows]
        return Report(
            document.model_dump(mode="json", by_alias=True),
            _table(("s", "m", "lambda"), pretty_rows),
            ("s", "m", "lambda_num", "lambda_float"),
            rows,
        )

    def specdim(self, generator: Generator, z: float | None = None, smax: int | None = None) -> Report:
        """Spectral dimension, optionally with zeta partial sums at z."""
        dimension = spectral_dimension(generator)
        payload: dict[str, Any] = {
            "family": generator.family.kind.value,
            "N": generator.family.n,
            "b": format_rational(generator.pair.b),
            "value": str(dimension),
            "method": dimension.method.value,
        }
        pretty = str(dimension)
        if z is not None:
            smax = smax or 200
            partial = zeta_partial(generator, z, smax)
            ratio = increment_ratio(generator, z, smax)
            payload["zeta"] = {"z": z, "smax": smax, "partial": partial, "increment_ratio": ratio}
            pretty += f"\nzeta({format_float(z)}) partial to s={smax}: {format_float(partial)}"
            pretty += f"\nincrement ratio: {format_float(ratio)}"
        return Report(payload, pretty)

    def heat_trace(self, generator: Generator, t: Fraction, smax: int) -> Report:
        """Heat-semigroup eigenvalues and the partial heat trace."""
        values = [float(v) for v in heat_eigenvalues(generator, t, smax)]
        trace = heat_trace_partial(generator, t, smax)
        payload = {
            "family": generator.family.kind.value,
            "N": generator.family.n,
            "b": format_rational(generator.pair.b),
            "t": format_rational(t),
            "smax": smax,
            "eigenvalues": values,
            "trace": trace,
        }
        rows = [(s, format_float(v)) for s, v in enumerate(values)]
        return Report(payload, format_float(trace), ("s", "exp_t_lambda"), rows)

    def central(self, n: int, b: Fraction, nu_n: LevyMeasure, smax: int) -> Report:
        """Central-semigroup eigenvalues on O_N^+ for s = 0..smax."""
        rows = [(s, format_rational(central_eigenvalue(n, b, nu_n, s))) for s in range(smax + 1)]
        payload = {
            "N": n,
            "b": format_rational(b),
            "nu": nu_n.model_dump(mode="json"),
            "entries": [{"s": s, "lambda": lam} for s, lam in rows],
        }
        return Report(payload, _table(("s", "lambda"), rows), ("s", "lambda"), rows)

    def verify(self) -> Report:
        """Run the invariant suite and tabulate pass/fail per property."""
        from src.services.verification import VerificationService

        results = VerificationService().run_all()
        rows = [(r.module, r.name, "pass" if r.passed else "FAIL", r.detail) for r in results]
        passed = all(r.passed for r in results)
        payload = {
            "passed": passed,
            "checks": [{"module": m, "name": n, "status": s, "detail": d} for m, n, s, d in rows],
        }
        lines = []
        for module, name, status, detail in rows:
            line = f"{status.upper():<4}  {module}.{name}"
            lines.append(f"{line}  ({detail})" if detail else line)
        return Report(payload, "\n".join(lines), ("module", "name", "status", "detail"), rows, ok=passed)
