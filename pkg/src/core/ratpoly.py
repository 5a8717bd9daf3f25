"""Exact rational arithmetic and dense univariate polynomials.

Scalars are ``fractions.Fraction`` throughout. ``Poly`` stores ascending
coefficients (index k holds the coefficient of x^k) in canonical form: the
zero polynomial is the empty tuple, otherwise the last entry is nonzero.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from src.core.errors import NonNormalizedPolynomialError

Scalar = Fraction | int


def _trim(coeffs: Iterable[Scalar]) -> tuple[Fraction, ...]:
    values = [Fraction(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True, init=False)
class Poly:
    """Dense polynomial over the rationals."""

    coeffs: tuple[Fraction, ...] = ()

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def constant(cls, value: Scalar) -> "Poly":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "Poly":
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        return add(self, _as_poly(other))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        return add(self, -_as_poly(other))

    def __rsub__(self, other: Scalar) -> "Poly":
        return add(_as_poly(other), -self)

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, Poly):
            return mul(self, other)
        factor = Fraction(other)
        return Poly(c * factor for c in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Poly":
        factor = Fraction(other)
        return Poly(c / factor for c in self.coeffs)

    def __pow__(self, exponent: int) -> "Poly":
        result = Poly.constant(1)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def __call__(self, x: Scalar) -> Fraction:
        return evaluate(self, x)

    def derivative(self) -> "Poly":
        return derivative(self)

    def antiderivative(self) -> "Poly":
        """Antiderivative with zero constant term."""
        return Poly([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return " + ".join(terms).replace("+ -", "- ")


def _as_poly(value: "Poly | Scalar") -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.constant(value)


def add(p: Poly, q: Poly) -> Poly:
    """Coefficientwise sum in canonical form."""
    size = max(len(p.coeffs), len(q.coeffs))
    return Poly(p.coeff(k) + q.coeff(k) for k in range(size))


def mul(p: Poly, q: Poly) -> Poly:
    """Product by coefficient convolution."""
    if p.is_zero() or q.is_zero():
        return Poly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Poly(out)


def derivative(p: Poly) -> Poly:
    """Formal derivative."""
    return Poly(k * c for k, c in enumerate(p.coeffs) if k > 0)


def evaluate(p: Poly, x: Scalar) -> Fraction:
    """Exact Horner evaluation."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def div_by_linear(p: Poly, c: Scalar) -> Poly:
    """Exact quotient of p by (x - c).

    Raises:
        NonNormalizedPolynomialError: If p(c) != 0, i.e. the division leaves a remainder
    """
    c = Fraction(c)
    if p.is_zero():
        return Poly()

    # Synthetic division from the top coefficient down
    quotient = [Fraction(0)] * (len(p.coeffs) - 1)
    carry = Fraction(0)
    for k in range(len(p.coeffs) - 1, 0, -1):
        carry = carry * c + p.coeffs[k]
        quotient[k - 1] = carry
    remainder = carry * c + p.coeffs[0]
    if remainder != 0:
        raise NonNormalizedPolynomialError(
            f"polynomial does not vanish at {c} (value {remainder}); cannot divide by (x - {c})"
        )
    return Poly(quotient)


def div_by_x_minus_one(p: Poly) -> Poly:
    """Exact quotient g with (x - 1) * g = p; p must vanish at 1."""
    return div_by_linear(p, 1)
