"""Normalized eigen-polynomials q_s of the three spheres.

Each family is normalized by q_s(1) = 1 (the counit evaluates u11 at 1):

- classical: Gram-Schmidt against the exact moments of the Beta-type law of u11
- half-liberated: the closed-form *-polynomials P_s, divided by P_s(1)
- free: the three-term recurrence with coefficients a_s and Chebyshev values U_s(N)
"""

import logging
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb

from src.core.measures import MomentFunctional, gram_schmidt
from src.core.ratpoly import Poly
from src.core.sphere import Family, SphereKind

logger = logging.getLogger(__name__)

_free_lock = threading.Lock()
_free_polys: dict[int, list[Poly]] = {}
_free_derivatives: dict[int, list[Fraction]] = {}


@lru_cache(maxsize=None)
def chebyshev_u(s: int) -> Poly:
    """Chebyshev polynomial of the second kind, U_0 = 1, U_1 = x."""
    prev, cur = Poly.constant(1), Poly.x()
    if s == 0:
        return prev
    for _ in range(s - 1):
        prev, cur = cur, Poly.x() * cur - prev
    return cur


@lru_cache(maxsize=None)
def u_value(n: int, s: int) -> int:
    """Integer value U_s(N); U_{-1}(N) = 0 by the recurrence."""
    if s < 0:
        return 0
    prev, cur = 0, 1
    for _ in range(s):
        prev, cur = cur, n * cur - prev
    return cur


def a_coeff(n: int, s: int) -> Fraction:
    """a_s = sum_{k<=s} (-1)^(s+k) U_k(N)."""
    return Fraction(sum((-1) ** (s + k) * u_value(n, k) for k in range(s + 1)))


def a_coeff_closed(n: int, s: int) -> Fraction:
    """Product form of a_s: U_m(U_m - U_{m-1}) for s=2m, U_m(U_{m+1} - U_m) for s=2m+1."""
    m, odd = divmod(s, 2)
    if odd:
        return Fraction(u_value(n, m) * (u_value(n, m + 1) - u_value(n, m)))
    return Fraction(u_value(n, m) * (u_value(n, m) - u_value(n, m - 1)))


def omega(n: int, ell: int) -> Fraction:
    """Recurrence coefficient of the *-polynomials (floor brackets)."""
    return Fraction(
        ((ell + 2) // 2) * (n - 1 + ell // 2),
        (n + ell) * (n + ell - 1),
    )


@lru_cache(maxsize=None)
def star_p(n: int, s: int) -> Poly:
    """Monic half-liberated polynomial P_s from its closed coefficient sums."""
    k, odd = divmod(s, 2)
    coeffs = [Fraction(0)] * (s + 1)
    for r in range(k + 1):
        sign = (-1) ** (k + r)
        if odd:
            value = Fraction(sign * comb(k, r) * comb(k + 1, r + 1), comb(n + 2 * k - 1, k - r))
            coeffs[2 * r + 1] = value
        else:
            value = Fraction(sign * comb(k, r) ** 2, comb(n + 2 * k - 2, k - r))
            coeffs[2 * r] = value
    return Poly(coeffs)


@lru_cache(maxsize=None)
def star_p_recurrence(n: int, s: int) -> Poly:
    """P_s from P_s = x P_{s-1} - omega_{s-2} P_{s-2}, P_0 = 1, P_1 = x."""
    if s == 0:
        return Poly.constant(1)
    if s == 1:
        return Poly.x()
    return Poly.x() * star_p_recurrence(n, s - 1) - star_p_recurrence(n, s - 2) * omega(n, s - 2)


def _free_sequence(n: int, s: int) -> list[Poly]:
    with _free_lock:
        polys = _free_polys.setdefault(n, [Poly.constant(1), Poly.x()])
        while len(polys) <= s:
            # a_{t+1} q_{t+2} = U_{t+1}(N) x q_{t+1} - a_t q_t
            t = len(polys) - 2
            nxt = (Poly.x() * polys[t + 1] * u_value(n, t + 1) - polys[t] * a_coeff(n, t)) / a_coeff(
                n, t + 1
            )
            polys.append(nxt)
        return polys[: s + 1]


@lru_cache(maxsize=None)
def family_q(family: Family, s: int) -> Poly:
    """Normalized eigen-polynomial q_s with q_s(1) = 1."""
    if s < 0:
        raise ValueError(f"degree must be nonnegative, got {s}")

    if family.kind is SphereKind.CLASSICAL:
        monic = gram_schmidt(MomentFunctional(family), s)[s]
        return monic / monic(1)

    if family.kind is SphereKind.HALF_LIBERATED:
        p = star_p(family.n, s)
        return p / p(1)

    return _free_sequence(family.n, s)[s]


def _free_derivative(n: int, s: int) -> Fraction:
    with _free_lock:
        values = _free_derivatives.setdefault(n, [Fraction(0)])
        running = sum(u_value(n, k) for k in range(len(values) - 1))
        while len(values) <= s:
            r = len(values) - 1
            running += u_value(n, r)
            values.append(values[-1] + Fraction(running) / a_coeff(n, r))
        return values[s]


def q_prime_at_one(family: Family, s: int) -> Fraction:
    """Closed form of q_s'(1), i.e. minus the drift eigenvalue for b = 1.

    Args:
        family: Sphere and dimension
        s: Degree

    Returns:
        Exact derivative at the normalization point
    """
    n = family.n
    if family.kind is SphereKind.CLASSICAL:
        return Fraction(s * (s + n - 2), n - 1)

    if family.kind is SphereKind.HALF_LIBERATED:
        k, odd = divmod(s, 2)
        if odd:
            return Fraction((2 * k + 1) * n + 2 * k * k - 1, n - 1)
        return Fraction(2 * k * (n + k - 1), n - 1)

    return _free_derivative(n, s)
