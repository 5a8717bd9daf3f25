"""Multiplicities, zeta and heat-trace partial sums, and spectral dimension."""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config import limits
from src.core.errors import DegenerateGeneratorError, SpectralDimensionMismatchError
from src.core.families import u_value
from src.core.levy import Generator, eigenvalue, heat_eigenvalues
from src.core.measures import LevyMeasure
from src.core.sphere import Family, SphereKind
from src.utils.rational import BigInt, Rational, format_rational

logger = logging.getLogger(__name__)


class SpectrumEntry(BaseModel):
    """One eigenspace: degree, dimension and eigenvalue."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, arbitrary_types_allowed=True)

    s: int = Field(ge=0)
    m: BigInt = Field(description="Multiplicity, dim D_s")
    lambda_: Rational = Field(alias="lambda", description="Eigenvalue λ_s")


class SpectrumReport(BaseModel):
    """Spectrum JSON document shared by the CLI and the API."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, arbitrary_types_allowed=True)

    family: SphereKind
    n: int = Field(alias="N", ge=2)
    b: Rational
    nu: LevyMeasure = Field(default_factory=LevyMeasure)
    entries: tuple[SpectrumEntry, ...] = ()


class DimensionMethod(StrEnum):
    EXACT_ORDER = "ExactOrder"
    NUMERIC_REGRESSION = "NumericRegression"


@dataclass(frozen=True)
class SpectralDimension:
    """Abscissa of convergence of the spectral zeta series; ``value`` None means infinite."""

    value: Fraction | None
    method: DimensionMethod

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "infinite" if self.value is None else format_rational(self.value)


def _binom(top: int, bottom: int) -> int:
    if top < 0 or bottom < 0 or bottom > top:
        return 0
    return math.comb(top, bottom)


def multiplicity(family: Family, s: int) -> int:
    """Dimension m_s of the eigenspace D_s.

    Args:
        family: Sphere and dimension
        s: Degree

    Returns:
        Exact multiplicity as a Python integer
    """
    n = family.n
    if family.kind is SphereKind.CLASSICAL:
        return _binom(s + n - 2, n - 2) + _binom(s + n - 3, n - 2)

    if family.kind is SphereKind.HALF_LIBERATED:
        m, odd = divmod(s, 2)
        if odd:
            # Monomials with m+1 black and m white letters, or the reverse
            return (
                _binom(m + n - 1, n - 2) * _binom(m + n - 2, n - 2)
                + _binom(m + n - 1, n - 2) * _binom(m + n - 2, n - 1)
                + _binom(m + n - 1, n - 1) * _binom(m + n - 2, n - 2)
            )
        base = _binom(m + n - 2, n - 2)
        return base * base + 2 * base * _binom(m + n - 2, n - 1)

    return u_value(n, s)


def spectrum(generator: Generator, smax: int) -> list[SpectrumEntry]:
    """Spectrum entries (s, m_s, λ_s) for s = 0..smax."""
    return [
        SpectrumEntry(s=s, m=multiplicity(generator.family, s), lambda_=eigenvalue(generator, s))
        for s in range(smax + 1)
    ]


def _negated_eigenvalues(generator: Generator, start: int, stop: int) -> list[Fraction]:
    values = []
    for s in range(start, stop + 1):
        lam = eigenvalue(generator, s)
        if lam >= 0:
            raise DegenerateGeneratorError(f"λ_{s} = {format_rational(lam)} is not negative for {generator}")
        values.append(-lam)
    return values


def _zeta_block(generator: Generator, z: float, start: int, stop: int) -> mpmath.mpf:
    total = mpmath.mpf(0)
    if stop < start:
        return total
    exponent = -mpmath.mpf(z) / 2
    # Ascending s for a reproducible summation order
    for s, minus_lam in zip(range(start, stop + 1), _negated_eigenvalues(generator, start, stop)):
        size = mpmath.mpf(minus_lam.numerator) / minus_lam.denominator
        total += multiplicity(generator.family, s) * mpmath.power(size, exponent)
    return total


def zeta_partial(generator: Generator, z: float, smax: int) -> float:
    """Partial sum Σ_{1<=s<=smax} m_s (-λ_s)^(-z/2), the kernel s = 0 excluded.

    Raises:
        DegenerateGeneratorError: If some λ_s with 1 <= s <= smax is not negative
    """
    with mpmath.workprec(limits.heat_precision_bits):
        return float(_zeta_block(generator, z, 1, smax))


def increment_ratio(generator: Generator, z: float, smax: int) -> float:
    """Ratio of the zeta block over (smax/2, smax] to the block over (smax/4, smax/2].

    For terms of polynomial order s^e the ratio tends to 2^(e+1): below 1 when
    the series converges at z, above 1 when it diverges.
    """
    if smax < 4:
        raise ValueError(f"increment ratio needs smax >= 4, got {smax}")
    with mpmath.workprec(limits.heat_precision_bits):
        upper = _zeta_block(generator, z, smax // 2 + 1, smax)
        lower = _zeta_block(generator, z, smax // 4 + 1, smax // 2)
        return float(upper / lower)


def heat_trace_partial(generator: Generator, t: Fraction, smax: int) -> float:
    """Partial heat trace Σ_{s<=smax} m_s exp(t λ_s).

    Raises:
        ValueError: If t is not positive
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError(f"heat trace needs t > 0, got {format_rational(t)}")
    with mpmath.workprec(limits.heat_precision_bits):
        total = mpmath.mpf(0)
        for s, value in enumerate(heat_eigenvalues(generator, t, smax)):
            total += multiplicity(generator.family, s) * value
        return float(total)


def growth_orders(family: Family) -> tuple[int | None, int]:
    """Exact growth orders (a, β): m_s ≍ s^a and -λ_s ≍ s^β for drift generators.

    ``a`` is None when the multiplicities grow exponentially.
    """
    n = family.n
    if family.kind is SphereKind.CLASSICAL:
        return n - 2, 2
    if family.kind is SphereKind.HALF_LIBERATED:
        return 2 * n - 3, 2
    if n == 2:
        return 1, 2
    return None, 1


def _loglog_slope(degrees: list[int], values: list[int | Fraction]) -> float:
    x = np.log(np.array(degrees, dtype=float))
    y = np.array([_log(v) for v in values], dtype=float)
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _log(value: int | Fraction) -> float:
    value = Fraction(value)
    return math.log(value.numerator) - math.log(value.denominator)


def spectral_dimension(generator: Generator, smax: int | None = None) -> SpectralDimension:
    """Spectral dimension d_L of a generator with b > 0.

    Decided by d = 2(a + 1) / β from the exact growth orders, cross-checked by
    fitting log m_s and log(-λ_s) against log s over [smax/2, smax]. When ν is
    nonzero, β is regressed from the symbolic eigenvalues; a gap beyond the
    jump tolerance downgrades the result to NumericRegression.

    Args:
        generator: Markov generator
        smax: End of the regression window

    Returns:
        Finite or infinite spectral dimension with the method that decided it

    Raises:
        DegenerateGeneratorError: If b is not positive
        SpectralDimensionMismatchError: If the drift-only regression disagrees with the exact order
    """
    if generator.pair.b <= 0:
        raise DegenerateGeneratorError(f"spectral dimension needs b > 0, got b={format_rational(generator.pair.b)}")

    a, beta = growth_orders(generator.family)
    if a is None:
        return SpectralDimension(None, DimensionMethod.EXACT_ORDER)

    exact = Fraction(2 * (a + 1), beta)
    drift_only = generator.pair.nu.is_zero()
    if smax is None:
        smax = limits.regression_smax if drift_only else limits.jump_regression_smax
    degrees = list(range(max(smax // 2, 1), smax + 1))
    lambdas = _negated_eigenvalues(generator, degrees[0], degrees[-1])
    beta_fit = _loglog_slope(degrees, lambdas)

    if not drift_only:
        gap = abs(beta_fit - beta) / beta
        if gap > limits.jump_regression_tolerance:
            estimate = Fraction(2 * (a + 1) / beta_fit).limit_denominator(1000)
            logger.warning(
                f"Eigenvalue growth {beta_fit:.4f} differs from {beta} for {generator}; "
                f"reporting regressed dimension {format_rational(estimate)}"
            )
            return SpectralDimension(estimate, DimensionMethod.NUMERIC_REGRESSION)
        return SpectralDimension(exact, DimensionMethod.EXACT_ORDER)

    a_fit = _loglog_slope(degrees, [multiplicity(generator.family, s) for s in degrees])
    regressed = 2 * (a_fit + 1) / beta_fit
    gap = abs(regressed - float(exact)) / float(exact)
    logger.debug(f"Regressed dimension {regressed:.6f} against exact {exact} for {generator}")
    if gap > limits.regression_tolerance:
        raise SpectralDimensionMismatchError(
            f"regression gives {regressed:.4f}, exact order gives {format_rational(exact)} for {generator}"
        )
    return SpectralDimension(exact, DimensionMethod.EXACT_ORDER)
