"""Moment functionals of u11 and the jump measure ν of a Lévy pair."""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import limits
from src.core.errors import AtomAtNormalizationPointError, MeasureError, SingularMomentError
from src.core.ratpoly import Poly
from src.core.sphere import Family, SphereKind
from src.utils.rational import Rational, format_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MomentFunctional:
    """Law of u11 under the Haar state of the family's quantum group."""

    family: Family

    def __str__(self) -> str:
        return f"moments[{self.family}]"


@lru_cache(maxsize=None)
def moment(mf: MomentFunctional, k: int) -> Fraction:
    """Exact k-th moment m_k of the law of u11.

    Args:
        mf: Moment functional of a family
        k: Nonnegative order

    Returns:
        m_k; zero for odd k since every law here is symmetric
    """
    if k < 0:
        raise ValueError(f"moment order must be nonnegative, got {k}")
    if k % 2:
        return Fraction(0)

    half = k // 2
    n = mf.family.n
    kind = mf.family.kind

    if kind is SphereKind.CLASSICAL:
        value = Fraction(1)
        for i in range(half):
            value *= Fraction(2 * i + 1, n + 2 * i)
        return value

    if kind is SphereKind.HALF_LIBERATED:
        return Fraction(factorial(half) * factorial(n - 1), factorial(n + half - 1))

    return _free_moment(n, k)


def _free_moment(n: int, k: int) -> Fraction:
    # The q_0 coordinate of x^k in the q^+ basis: peel off q_d from the top degree down
    from src.core.families import family_q

    family = Family(SphereKind.FREE, n)
    remainder = Poly.monomial(k)
    for d in range(k, 0, -1):
        c = remainder.coeff(d)
        if c == 0:
            continue
        q = family_q(family, d)
        remainder = remainder - q * (c / q.leading)
    return remainder.coeff(0)


def integrate_poly(mf: MomentFunctional, p: Poly) -> Fraction:
    """Integrate p against the law of u11 by linearity over the moments."""
    return sum((c * moment(mf, k) for k, c in enumerate(p.coeffs) if c != 0), Fraction(0))


_gram_lock = threading.Lock()
_gram_cache: dict[MomentFunctional, list[Poly]] = {}


def gram_schmidt(mf: MomentFunctional, maxdeg: int) -> list[Poly]:
    """Monic orthogonal polynomials of degrees 0..maxdeg for a moment functional.

    Uses the Stieltjes three-term recurrence, which is Gram-Schmidt applied to
    x * p_n with only the last two polynomials surviving the projection.

    Args:
        mf: Moment functional
        maxdeg: Highest degree to produce

    Returns:
        List of monic polynomials p_0, ..., p_maxdeg

    Raises:
        SingularMomentError: If some p_n has zero norm (singular Hankel matrix)
    """
    x = Poly.x()
    with _gram_lock:
        polys = _gram_cache.setdefault(mf, [Poly.constant(1)])
        while len(polys) <= maxdeg:
            n = len(polys) - 1
            p_n = polys[n]
            norm_n = integrate_poly(mf, p_n * p_n)
            if norm_n == 0:
                raise SingularMomentError(f"zero norm at degree {n} for {mf}")

            alpha = integrate_poly(mf, x * p_n * p_n) / norm_n
            nxt = (x - alpha) * p_n
            if n > 0:
                p_prev = polys[n - 1]
                beta = norm_n / integrate_poly(mf, p_prev * p_prev)
                nxt = nxt - p_prev * beta
            polys.append(nxt)
        return list(polys[: maxdeg + 1])


class Atom(BaseModel):
    """Point mass ``w * δ_x``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: Rational = Field(description="Location")
    w: Rational = Field(description="Weight, strictly positive")

    @field_validator("w")
    @classmethod
    def _positive_weight(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError(f"atom weight must be positive, got {format_rational(value)}")
        return value


class Piece(BaseModel):
    """Polynomial density on [lo, hi], coefficients in ascending degree."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lo: Rational
    hi: Rational
    coeffs: tuple[Rational, ...] = ()

    @model_validator(mode="after")
    def _ordered(self) -> "Piece":
        if self.lo >= self.hi:
            raise ValueError(f"piece needs lo < hi, got [{format_rational(self.lo)}, {format_rational(self.hi)}]")
        return self

    @property
    def density(self) -> Poly:
        return Poly(self.coeffs)


class LevyMeasure(BaseModel):
    """Finite positive measure made of atoms and polynomial density pieces."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    atoms: tuple[Atom, ...] = ()
    pieces: tuple[Piece, ...] = ()

    @classmethod
    def zero(cls) -> "LevyMeasure":
        return cls()

    @classmethod
    def delta(cls, x: Fraction | int, w: Fraction | int = 1) -> "LevyMeasure":
        return cls(atoms=(Atom(x=Fraction(x), w=Fraction(w)),))

    @classmethod
    def uniform(cls, lo: Fraction | int = -1, hi: Fraction | int = 1, density: Fraction | int = 1) -> "LevyMeasure":
        return cls(pieces=(Piece(lo=Fraction(lo), hi=Fraction(hi), coeffs=(Fraction(density),)),))

    @classmethod
    def load(cls, path: Path | str) -> "LevyMeasure":
        """Read a measure from its JSON file.

        Raises:
            MeasureError: If the file is missing or does not match the schema
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise MeasureError(f"cannot read {path}: {e.strerror or e}") from e
        return cls.from_json(text)

    @classmethod
    def from_json(cls, text: str) -> "LevyMeasure":
        try:
            measure = cls.model_validate_json(text)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"])
            raise MeasureError(f"{where}: {first['msg']}") from e
        measure.screen_density()
        return measure

    def is_zero(self) -> bool:
        return not self.atoms and not self.pieces

    def scaled(self, factor: Fraction | int) -> "LevyMeasure":
        """The measure multiplied by a positive constant."""
        factor = Fraction(factor)
        return LevyMeasure(
            atoms=tuple(Atom(x=a.x, w=a.w * factor) for a in self.atoms),
            pieces=tuple(Piece(lo=p.lo, hi=p.hi, coeffs=tuple(c * factor for c in p.coeffs)) for p in self.pieces),
        )

    def combined(self, other: "LevyMeasure") -> "LevyMeasure":
        """Sum of two measures."""
        return LevyMeasure(atoms=self.atoms + other.atoms, pieces=self.pieces + other.pieces)

    def validate_support(self, bound: Fraction | int = 1) -> "LevyMeasure":
        """Check the support lies in [-bound, bound) with no atom at the normalization point.

        Args:
            bound: 1 for jump measures of the sphere, N for the central formula

        Returns:
            The measure itself

        Raises:
            AtomAtNormalizationPointError: If an atom sits at ``bound``
            MeasureError: If an atom or piece leaves [-bound, bound]
        """
        bound = Fraction(bound)
        for atom in self.atoms:
            if atom.x == bound:
                raise AtomAtNormalizationPointError(
                    f"atom at {format_rational(bound)}; fold its weight into the drift b instead"
                )
            if not -bound <= atom.x < bound:
                raise MeasureError(
                    f"atom at {format_rational(atom.x)} outside [{format_rational(-bound)}, {format_rational(bound)}]"
                )
        for piece in self.pieces:
            if piece.lo < -bound or piece.hi > bound:
                raise MeasureError(
                    f"piece [{format_rational(piece.lo)}, {format_rational(piece.hi)}] "
                    f"outside [{format_rational(-bound)}, {format_rational(bound)}]"
                )
        return self

    def negative_samples(self, count: int | None = None) -> list[tuple[int, Fraction, Fraction]]:
        """Density samples that come out negative.

        Args:
            count: Equispaced samples per piece, endpoints included

        Returns:
            (piece index, sample point, density value) for every negative sample
        """
        count = count or limits.density_samples
        found = []
        for index, piece in enumerate(self.pieces):
            density = piece.density
            step = (piece.hi - piece.lo) / (count - 1)
            for i in range(count):
                point = piece.lo + step * i
                value = density(point)
                if value < 0:
                    found.append((index, point, value))
        return found

    def screen_density(self) -> bool:
        """Log a warning per negative density sample; True when none was found."""
        negatives = self.negative_samples()
        for index, point, value in negatives:
            logger.warning(
                f"Density of piece {index} is negative at x={format_rational(point)} "
                f"({float(value):.6g}); the measure may not be positive"
            )
        return not negatives


def levy_integrate(nu: LevyMeasure, p: Poly) -> Fraction:
    """Exact integral of p against ν.

    Atoms contribute ``w * p(x)``; pieces integrate ``p * density`` through its
    antiderivative between the endpoints.
    """
    total = Fraction(0)
    for atom in nu.atoms:
        total += atom.w * p(atom.x)
    for piece in nu.pieces:
        primitive = (p * piece.density).antiderivative()
        total += primitive(piece.hi) - primitive(piece.lo)
    return total
