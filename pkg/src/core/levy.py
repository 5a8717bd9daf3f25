"""Generators of invariant Markov semigroups on the spheres.

A generator is classified by a Lévy pair (b, ν): a drift b >= 0 and a finite
positive jump measure ν on [-1, 1). Its generating functional is

    ψ(p) = -b p'(1) + ∫ (p(x) - p(1)) / (1 - x) dν(x)

and the generator acts on the s-th eigenspace by λ_s = ψ(q_s).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import limits
from src.core.families import chebyshev_u, family_q, q_prime_at_one
from src.core.measures import LevyMeasure, levy_integrate
from src.core.ratpoly import Poly, div_by_linear, div_by_x_minus_one
from src.core.sphere import Family
from src.utils.rational import Rational, format_rational

logger = logging.getLogger(__name__)


class LevyPair(BaseModel):
    """Drift coefficient and jump measure of a generating functional."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    b: Rational = Field(default=Fraction(0), description="Drift, nonnegative")
    nu: LevyMeasure = Field(default_factory=LevyMeasure)

    @field_validator("b")
    @classmethod
    def _nonnegative_drift(cls, value: Fraction) -> Fraction:
        if value < 0:
            raise ValueError(f"drift b must be nonnegative, got {format_rational(value)}")
        return value

    def scaled(self, factor: Fraction | int) -> "LevyPair":
        """The pair (c b, c ν)."""
        return LevyPair(b=self.b * Fraction(factor), nu=self.nu.scaled(factor))

    def __add__(self, other: "LevyPair") -> "LevyPair":
        return LevyPair(b=self.b + other.b, nu=self.nu.combined(other.nu))


@dataclass(frozen=True)
class Generator:
    """Markov generator L on the sphere of ``family`` given by a Lévy pair."""

    family: Family
    pair: LevyPair = field(default_factory=LevyPair)

    def __post_init__(self) -> None:
        self.pair.nu.validate_support(1)

    def __str__(self) -> str:
        return f"L[{self.family}, b={format_rational(self.pair.b)}]"


def laplace(family: Family) -> Generator:
    """The Laplace operator, (b, ν) = (N - 1, 0)."""
    return Generator(family, LevyPair(b=Fraction(family.n - 1)))


def psi(pair: LevyPair, p: Poly) -> Fraction:
    """Generating functional ψ(p) of a Lévy pair.

    Args:
        pair: Drift and jump measure
        p: Polynomial in u11

    Returns:
        Exact value of ψ(p)

    Raises:
        AtomAtNormalizationPointError: If ν has an atom at 1
    """
    pair.nu.validate_support(1)
    value = -pair.b * p.derivative()(1)
    if pair.nu.is_zero():
        return value
    # g = (p - p(1)) / (x - 1), so the jump term (p - p(1)) / (1 - x) integrates to -∫ g dν
    g = div_by_x_minus_one(p - p(1))
    return value - levy_integrate(pair.nu, g)


def eigenvalue(generator: Generator, s: int) -> Fraction:
    """Eigenvalue λ_s = ψ(q_s) on the s-th eigenspace.

    Drift-only generators take the closed form -b q_s'(1), which equals ψ(q_s)
    without building q_s.
    """
    if s == 0:
        return Fraction(0)
    pair = generator.pair
    if pair.nu.is_zero():
        return -pair.b * q_prime_at_one(generator.family, s)
    return psi(pair, family_q(generator.family, s))


def _to_mpf(value: Fraction) -> mpmath.mpf:
    return mpmath.mpf(value.numerator) / value.denominator


def heat_eigenvalues(generator: Generator, t: Fraction, smax: int) -> list[mpmath.mpf]:
    """Eigenvalues exp(t λ_s) of the heat semigroup T_t for s = 0..smax.

    Exponentials are evaluated by mpmath at ``limits.heat_precision_bits`` bits.

    Raises:
        ValueError: If t is negative
    """
    t = Fraction(t)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {format_rational(t)}")

    values = [mpmath.mpf(1)]
    with mpmath.workprec(limits.heat_precision_bits):
        for s in range(1, smax + 1):
            exponent = t * eigenvalue(generator, s)
            values.append(mpmath.mpf(1) if exponent == 0 else mpmath.exp(_to_mpf(exponent)))
    return values


def central_eigenvalue(n: int, b: Fraction, nu_n: LevyMeasure, s: int) -> Fraction:
    """Eigenvalue of a central Markov semigroup on O_N^+.

    λ_s = -b U_s'(N) / U_s(N) + ∫ (U_s(x) - U_s(N)) / (U_s(N) (N - x)) dν_N(x)
    with ν_N a measure on [-N, N).

    Raises:
        AtomAtNormalizationPointError: If ν_N has an atom at N
    """
    nu_n.validate_support(n)
    if s == 0:
        return Fraction(0)

    u = chebyshev_u(s)
    at_n = u(n)
    value = -Fraction(b) * u.derivative()(n) / at_n
    if nu_n.is_zero():
        return value
    quotient = div_by_linear(u - at_n, n)
    return value - levy_integrate(nu_n, quotient) / at_n


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of the finite-degree conditional positivity test."""

    positive: bool
    matrix: tuple[tuple[Fraction, ...], ...]
    failing_index: int | None = None


def _psd_failure(matrix: list[list[Fraction]]) -> int | None:
    # Symmetric elimination: a negative pivot, or a zero pivot over a nonzero row, breaks PSD
    size = len(matrix)
    work = [row[:] for row in matrix]
    for i in range(size):
        pivot = work[i][i]
        if pivot < 0:
            return i
        if pivot == 0:
            if any(work[i][j] != 0 for j in range(i + 1, size)):
                return i
            continue
        for r in range(i + 1, size):
            factor = work[r][i] / pivot
            if factor == 0:
                continue
            for c in range(i + 1, size):
                work[r][c] -= factor * work[i][c]
    return None


def is_conditionally_positive(pair: LevyPair, degree: int) -> PositivityReport:
    """Check ψ(a* a) >= 0 on the ideal vanishing at 1, up to a degree.

    Builds M_jk = ψ((x - 1) x^j (x - 1) x^k) for 0 <= j, k < degree and tests
    it for positive semidefiniteness exactly.

    Args:
        pair: Lévy pair to test
        degree: Size of the test matrix, at least 1

    Returns:
        Report with the verdict, the matrix and the first failing pivot
    """
    if degree < 1:
        raise ValueError(f"degree must be at least 1, got {degree}")

    vanishing = Poly.x() - 1
    basis = [vanishing * Poly.monomial(j) for j in range(degree)]
    matrix = [[psi(pair, basis[j] * basis[k]) for k in range(degree)] for j in range(degree)]

    failing = _psd_failure(matrix)
    if failing is not None:
        logger.info(f"Conditional positivity fails at pivot {failing} for b={format_rational(pair.b)}")
    return PositivityReport(
        positive=failing is None,
        matrix=tuple(tuple(row) for row in matrix),
        failing_index=failing,
    )
