"""Weingarten calculus for O_N, O_N^* and O_N^+.

Haar moments of words in the generators u_ij are sums over pairs of pairings
weighted by the inverse of the loop-count Gram matrix. The pairing class
depends on the quantum group: all pairings for O_N, balanced pairings for
O_N^* and non-crossing pairings for O_N^+.
"""

import logging
import re
import threading
from collections import Counter
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache
from math import factorial

from src.config import limits
from src.core.errors import SingularGramError, WordLengthError, WordSyntaxError
from src.core.families import family_q
from src.core.measures import MomentFunctional, integrate_poly
from src.core.ratpoly import Poly
from src.core.sphere import Family, SphereKind

logger = logging.getLogger(__name__)

# One token of the word syntax: u11, u23^4, u{1,12}, u{10,3}^2
TOKEN_PATTERN = re.compile(r"^u(?:(\d)(\d)|\{(\d+),(\d+)\})(?:\^(\d+))?$")

Letter = tuple[int, int]


class PairingVariant(StrEnum):
    ALL = "all"
    BALANCED = "balanced"
    NONCROSSING = "noncrossing"


VARIANT_FOR_KIND = {
    SphereKind.CLASSICAL: PairingVariant.ALL,
    SphereKind.HALF_LIBERATED: PairingVariant.BALANCED,
    SphereKind.FREE: PairingVariant.NONCROSSING,
}


def word_cap(variant: PairingVariant) -> int:
    """Longest word the engine accepts for a pairing variant."""
    return {
        PairingVariant.ALL: limits.max_word_all,
        PairingVariant.BALANCED: limits.max_word_balanced,
        PairingVariant.NONCROSSING: limits.max_word_noncrossing,
    }[variant]


@dataclass(frozen=True)
class Word:
    """Product u_{r1 c1} u_{r2 c2} ... of generators, read left to right."""

    letters: tuple[Letter, ...]
    family: Family

    def __post_init__(self) -> None:
        n = self.family.n
        for row, col in self.letters:
            if not (1 <= row <= n and 1 <= col <= n):
                raise WordSyntaxError(f"index u{{{row},{col}}} outside 1..{n}")

    @classmethod
    def power(cls, family: Family, k: int, row: int = 1, col: int = 1) -> "Word":
        return cls(((row, col),) * k, family)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(row for row, _ in self.letters)

    @property
    def cols(self) -> tuple[int, ...]:
        return tuple(col for _, col in self.letters)

    def prefixed(self, k: int) -> "Word":
        """The word u11^k * self."""
        return Word(((1, 1),) * k + self.letters, self.family)

    def rotated(self, shift: int) -> "Word":
        """Cyclic rotation moving the first ``shift`` letters to the end."""
        if not self.letters:
            return self
        shift %= len(self.letters)
        return Word(self.letters[shift:] + self.letters[:shift], self.family)

    def is_u11_power(self) -> bool:
        return all(letter == (1, 1) for letter in self.letters)

    def __str__(self) -> str:
        return format_word(self)


def parse_word(text: str, family: Family) -> Word:
    """Read a word from whitespace-separated tokens such as "u11^2 u22^2".

    Raises:
        WordSyntaxError: On an unreadable token or an index outside 1..N
    """
    letters: list[Letter] = []
    for token in text.split():
        match = TOKEN_PATTERN.match(token)
        if match is None:
            raise WordSyntaxError(f"cannot read token {token!r}; expected u<row><col>[^k] or u{{row,col}}[^k]")
        short_row, short_col, long_row, long_col, exponent = match.groups()
        row = int(short_row or long_row)
        col = int(short_col or long_col)
        repeat = int(exponent) if exponent is not None else 1
        letters.extend([(row, col)] * repeat)
    return Word(tuple(letters), family)


def format_word(word: Word) -> str:
    """Inverse of parse_word, grouping runs of equal letters into powers."""
    if not word.letters:
        return ""
    braces = word.family.n >= 10
    tokens = []
    run_letter, run = word.letters[0], 0
    for letter in (*word.letters, None):
        if letter == run_letter:
            run += 1
            continue
        row, col = run_letter
        token = f"u{{{row},{col}}}" if braces else f"u{row}{col}"
        tokens.append(token if run == 1 else f"{token}^{run}")
        if letter is not None:
            run_letter, run = letter, 1
    return " ".join(tokens)


@dataclass(frozen=True)
class Pairing:
    """Perfect matching of {1, ..., 2k}; pairs (a, b) with a < b, sorted."""

    pairs: tuple[tuple[int, int], ...]

    def partner(self) -> dict[int, int]:
        mate = {}
        for a, b in self.pairs:
            mate[a] = b
            mate[b] = a
        return mate

    def is_noncrossing(self) -> bool:
        return not any(a < c < b < d for a, b in self.pairs for c, d in self.pairs)

    def is_balanced(self) -> bool:
        return all((a + b) % 2 == 1 for a, b in self.pairs)

    def admits(self, indices: tuple[int, ...]) -> bool:
        """δ_p(indices): the index tuple is constant on every pair."""
        return all(indices[a - 1] == indices[b - 1] for a, b in self.pairs)

    def __str__(self) -> str:
        return "".join(f"({a}{b})" if max(a, b) < 10 else f"({a},{b})" for a, b in self.pairs)


def _all_matchings(points: tuple[int, ...]) -> list[list[tuple[int, int]]]:
    if not points:
        return [[]]
    first, rest = points[0], points[1:]
    out = []
    for i, other in enumerate(rest):
        for tail in _all_matchings(rest[:i] + rest[i + 1 :]):
            out.append([(first, other), *tail])
    return out


def _balanced_matchings(points: tuple[int, ...]) -> list[list[tuple[int, int]]]:
    if not points:
        return [[]]
    first, rest = points[0], points[1:]
    out = []
    for i, other in enumerate(rest):
        if (first + other) % 2 == 0:
            continue
        for tail in _balanced_matchings(rest[:i] + rest[i + 1 :]):
            out.append([(first, other), *tail])
    return out


def _noncrossing_matchings(points: tuple[int, ...]) -> list[list[tuple[int, int]]]:
    if not points:
        return [[]]
    out = []
    # The first point pairs with points[m], m odd, leaving an even block inside and outside
    for m in range(1, len(points), 2):
        for inner in _noncrossing_matchings(points[1:m]):
            for outer in _noncrossing_matchings(points[m + 1 :]):
                out.append([(points[0], points[m]), *inner, *outer])
    return out


@lru_cache(maxsize=None)
def enumerate_pairings(k: int, variant: PairingVariant) -> tuple[Pairing, ...]:
    """All pairings of 2k points in the given class, in canonical sorted order.

    Args:
        k: Number of pairs
        variant: Pairing class

    Returns:
        Duplicate-free tuple of pairings; (2k-1)!! for ALL, k! for BALANCED,
        Catalan(k) for NONCROSSING
    """
    points = tuple(range(1, 2 * k + 1))
    builder = {
        PairingVariant.ALL: _all_matchings,
        PairingVariant.BALANCED: _balanced_matchings,
        PairingVariant.NONCROSSING: _noncrossing_matchings,
    }[variant]
    canonical = sorted(tuple(sorted(pairs)) for pairs in builder(points))
    return tuple(Pairing(pairs) for pairs in canonical)


def loops(p: Pairing, q: Pairing) -> int:
    """Number of cycles of the multigraph obtained by superposing p and q."""
    mate_p, mate_q = p.partner(), q.partner()
    seen: set[int] = set()
    count = 0
    for start in mate_p:
        if start in seen:
            continue
        count += 1
        point = start
        while True:
            seen.add(point)
            other = mate_p[point]
            seen.add(other)
            point = mate_q[other]
            if point == start:
                break
    return count


def _invert_integer_matrix(matrix: list[list[int]]) -> list[list[Fraction]]:
    # Fraction-free Gauss-Jordan on [G | I]: every division is exact, and at the
    # end the left block is d*I and the right block is d*G^-1
    size = len(matrix)
    aug = [row[:] + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(matrix)]
    previous = 1
    for k in range(size):
        pivot = next((i for i in range(k, size) if aug[i][k] != 0), None)
        if pivot is None:
            raise SingularGramError(f"no pivot in column {k + 1} of a {size}x{size} Gram matrix")
        if pivot != k:
            aug[k], aug[pivot] = aug[pivot], aug[k]

        pivot_row = aug[k]
        diag = pivot_row[k]
        for i in range(size):
            if i == k:
                continue
            row = aug[i]
            factor = row[k]
            aug[i] = [(diag * value - factor * pivot_value) // previous for value, pivot_value in zip(row, pivot_row)]
        previous = diag

    return [[Fraction(aug[i][size + j], aug[i][i]) for j in range(size)] for i in range(size)]


_weingarten_lock = threading.Lock()
_weingarten_cache: dict[tuple[int, PairingVariant, int], tuple[tuple[Fraction, ...], ...]] = {}


def gram_matrix(k: int, variant: PairingVariant, n: int) -> list[list[int]]:
    """G(p, q) = N^loops(p, q) over the pairings of 2k points."""
    pairings = enumerate_pairings(k, variant)
    return [[n ** loops(p, q) for q in pairings] for p in pairings]


def weingarten_matrix(k: int, variant: PairingVariant, n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of the Gram matrix, cached per (k, variant, N).

    Raises:
        SingularGramError: If the Gram matrix is singular (N too small for 2k points)
    """
    key = (k, variant, n)
    with _weingarten_lock:
        cached = _weingarten_cache.get(key)
        if cached is not None:
            return cached

        logger.debug(f"Inverting {variant} Gram matrix for k={k}, N={n}")
        try:
            inverse = _invert_integer_matrix(gram_matrix(k, variant, n))
        except SingularGramError as e:
            raise SingularGramError(f"{variant} pairings of {2 * k} points at N={n}: {e}") from e

        result = tuple(tuple(row) for row in inverse)
        _weingarten_cache[key] = result
        return result


def is_validated_regime(word: Word) -> bool:
    """False for half-liberated words outside the row-one / column-one regime."""
    if word.family.kind is not SphereKind.HALF_LIBERATED:
        return True
    return all(row == 1 for row in word.rows) or all(col == 1 for col in word.cols)


def haar_moment(word: Word) -> Fraction:
    """Haar state of a word, by the Weingarten formula.

    Args:
        word: Word in the generators of the family's quantum group

    Returns:
        Exact value h(word); zero for odd length

    Raises:
        WordLengthError: If the word exceeds the cap of its pairing variant
        SingularGramError: If the Gram matrix is singular for this N
    """
    variant = VARIANT_FOR_KIND[word.family.kind]
    cap = word_cap(variant)
    if len(word) > cap:
        detail = f"word of length {len(word)} exceeds {cap} for {word.family.kind} words"
        if variant is PairingVariant.BALANCED:
            detail += f" (capped at {cap} rather than 12: length 12 has 720 balanced pairings)"
        raise WordLengthError(detail)
    if len(word) % 2:
        return Fraction(0)
    if not word.letters:
        return Fraction(1)

    if not is_validated_regime(word):
        logger.warning(f"Half-liberated moment of {word} is outside the cross-validated regime (unverified convention)")

    k = len(word) // 2
    pairings = enumerate_pairings(k, variant)
    row_hits = [i for i, p in enumerate(pairings) if p.admits(word.rows)]
    if not row_hits:
        return Fraction(0)
    col_hits = [j for j, q in enumerate(pairings) if q.admits(word.cols)]
    if not col_hits:
        return Fraction(0)

    weingarten = weingarten_matrix(k, variant, word.family.n)
    return sum((weingarten[i][j] for i in row_hits for j in col_hits), Fraction(0))


def ebi(word: Word, smax: int | None = None) -> Poly:
    """Bi-invariant conditional expectation of a word onto polynomials in u11.

    Projects orthogonally in the Haar inner product onto span{q_0, ..., q_smax}.

    Args:
        word: Word to project
        smax: Highest degree kept; defaults to the word length. Degrees above
            the word length carry no component and are skipped

    Returns:
        Polynomial in x = u11

    Raises:
        ValueError: If smax is shorter than the word
    """
    smax = len(word) if smax is None else smax
    if smax < len(word):
        raise ValueError(f"smax={smax} is shorter than the word length {len(word)}")
    if word.is_u11_power():
        return Poly.monomial(len(word))

    family = word.family
    mf = MomentFunctional(family)
    result = Poly()
    for k in range(min(smax, len(word)) + 1):
        q = family_q(family, k)
        # q_k has the parity of k, so odd total length vanishes term by term
        if (k + len(word)) % 2:
            continue
        numerator = sum(
            (c * haar_moment(word.prefixed(j)) for j, c in enumerate(q.coeffs) if c != 0),
            Fraction(0),
        )
        if numerator == 0:
            continue
        result = result + q * (numerator / integrate_poly(mf, q * q))
    return result


def phi(word: Word) -> Fraction:
    """Idempotent state Φ = counit after E_bi."""
    return ebi(word, len(word))(1)


def star_word_moment(indices: tuple[int, ...] | list[int], n: int) -> Fraction:
    """Closed-form half-liberated integral of x_{i1} ... x_{ik}.

    Vanishes unless each index appears equally often at odd and even
    positions; otherwise (N-1)! * prod(l_a!) / (N + sum(l_a) - 1)!.
    """
    odd = Counter(indices[0::2])
    even = Counter(indices[1::2])
    if odd != even:
        return Fraction(0)
    counts = list(odd.values())
    numerator = factorial(n - 1)
    for count in counts:
        numerator *= factorial(count)
    return Fraction(numerator, factorial(n + sum(counts) - 1))
