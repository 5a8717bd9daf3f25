"""Tests for generating functionals, eigenvalues and the positivity check."""

from fractions import Fraction

import mpmath
import pytest
from pydantic import ValidationError

from src.core.errors import AtomAtNormalizationPointError
from src.core.families import family_q
from src.core.levy import (
    Generator,
    LevyPair,
    _psd_failure,
    central_eigenvalue,
    eigenvalue,
    heat_eigenvalues,
    is_conditionally_positive,
    laplace,
    psi,
)
from src.core.measures import LevyMeasure
from src.core.ratpoly import Poly
from src.core.sphere import Family, SphereKind

x = Poly.x()
CLASSICAL = SphereKind.CLASSICAL
HALF = SphereKind.HALF_LIBERATED
FREE = SphereKind.FREE


class TestLevyPair:
    """Tests for the LevyPair model."""

    def test_negative_drift_rejected(self):
        """Test b < 0 fails validation."""
        with pytest.raises(ValidationError, match="nonnegative"):
            LevyPair(b=-1)

    def test_string_drift(self):
        """Test b accepts rational text."""
        assert LevyPair(b="3/2").b == Fraction(3, 2)

    def test_scaled_and_sum(self):
        """Test scaling and adding pairs."""
        pair = LevyPair(b=1, nu=LevyMeasure.delta(0)).scaled(2) + LevyPair(b=1)
        assert pair.b == 3
        assert pair.nu.atoms[0].w == 2

    def test_generator_rejects_atom_at_one(self, classical3):
        """Test an atom at the normalization point is rejected."""
        with pytest.raises(AtomAtNormalizationPointError):
            Generator(classical3, LevyPair(nu=LevyMeasure.delta(1)))


class TestPsi:
    """Tests for psi."""

    def test_normalized(self, positive_measures):
        """Test ψ(1) = 0."""
        for nu in positive_measures:
            assert psi(LevyPair(b=2, nu=nu), Poly.constant(1)) == 0

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_classical_drift(self, n):
        """Test b = 1, ν = 0 gives -s(s+N-2)/(N-1) on classical q_s."""
        family = Family(CLASSICAL, n)
        for s in range(8):
            assert psi(LevyPair(b=1), family_q(family, s)) == Fraction(-s * (s + n - 2), n - 1)

    @pytest.mark.parametrize("x0", [Fraction(-1), Fraction(0), Fraction(1, 2)])
    def test_jump_on_doubly_vanishing(self, x0):
        """Test ψ((x-1)^2) = 1 - x0 >= 0 for ν = δ_x0."""
        assert psi(LevyPair(nu=LevyMeasure.delta(x0)), (x - 1) ** 2) == 1 - x0

    def test_linear_in_p(self, positive_measures):
        """Test ψ(p + c q) = ψ(p) + c ψ(q)."""
        p, q = x**4 - x, 3 * x**2 + 1
        for nu in positive_measures:
            pair = LevyPair(b=Fraction(1, 3), nu=nu)
            assert psi(pair, p + 5 * q) == psi(pair, p) + 5 * psi(pair, q)

    def test_additive_in_pair(self, positive_measures):
        """Test ψ for (b1 + b2, ν1 + ν2) is the sum."""
        p = x**5 - 2 * x**2
        first = LevyPair(b=1, nu=positive_measures[0])
        second = LevyPair(b=Fraction(1, 2), nu=positive_measures[3])
        assert psi(first + second, p) == psi(first, p) + psi(second, p)

    def test_atom_at_one(self):
        """Test ψ refuses a measure with an atom at 1."""
        pair = LevyPair(nu=LevyMeasure.delta(1))
        with pytest.raises(AtomAtNormalizationPointError):
            psi(pair, x)


class TestEigenvalue:
    """Tests for eigenvalue and laplace."""

    @pytest.mark.parametrize("kind", list(SphereKind))
    def test_zero_eigenvalue(self, kind, positive_measures):
        """Test λ_0 = 0 for every generator."""
        family = Family(kind, 4)
        for nu in positive_measures:
            assert eigenvalue(Generator(family, LevyPair(b=1, nu=nu)), 0) == 0

    def test_free_circle(self, free2):
        """Test -λ_{2k+1} = 2k^2+4k+1 and -λ_{2k} = 2k^2+2k at N = 2."""
        generator = Generator(free2, LevyPair(b=1))
        for k in range(6):
            assert -eigenvalue(generator, 2 * k + 1) == 2 * k * k + 4 * k + 1
            assert -eigenvalue(generator, 2 * k) == 2 * k * k + 2 * k

    @pytest.mark.parametrize("kind", list(SphereKind))
    def test_antipodal_jump(self, kind):
        """Test ν = w δ_{-1} kills even eigenvalues and gives λ_1 = -w."""
        generator = Generator(Family(kind, 3), LevyPair(nu=LevyMeasure.delta(-1, 3)))
        assert eigenvalue(generator, 1) == -3
        for s in (2, 4, 6):
            assert eigenvalue(generator, s) == 0

    def test_laplace_examples(self, classical3):
        """Test classical λ_1 = -2 at N = 3 and half-liberated λ_2 = -2N."""
        assert eigenvalue(laplace(classical3), 1) == -2
        for n in (2, 3, 5):
            assert eigenvalue(laplace(Family(HALF, n)), 2) == -2 * n

    @pytest.mark.parametrize("kind", list(SphereKind))
    def test_drift_only_negative(self, kind):
        """Test b > 0, ν = 0 gives λ_s < 0 for 1 <= s <= 40."""
        generator = Generator(Family(kind, 3), LevyPair(b=Fraction(1, 2)))
        assert all(eigenvalue(generator, s) < 0 for s in range(1, 41))

    @pytest.mark.parametrize("kind", list(SphereKind))
    def test_fast_path_matches_psi(self, kind):
        """Test the closed-form drift eigenvalue equals ψ(q_s)."""
        family = Family(kind, 4)
        generator = Generator(family, LevyPair(b=2))
        for s in range(12):
            assert eigenvalue(generator, s) == psi(generator.pair, family_q(family, s))

    def test_free_equals_half_at_n2(self, positive_measures):
        """Test the free and half-liberated circles share eigenvalues."""
        for nu in positive_measures:
            pair = LevyPair(b=1, nu=nu)
            free = Generator(Family(FREE, 2), pair)
            half = Generator(Family(HALF, 2), pair)
            for s in range(12):
                assert eigenvalue(free, s) == eigenvalue(half, s)


class TestHeatEigenvalues:
    """Tests for heat_eigenvalues."""

    def test_time_zero(self, classical3):
        """Test T_0 is the identity."""
        assert heat_eigenvalues(laplace(classical3), Fraction(0), 5) == [1] * 6

    def test_sphere_value(self, classical3):
        """Test e^{tλ_1} = e^{-2} for the Laplacian on the 2-sphere."""
        values = heat_eigenvalues(laplace(classical3), Fraction(1), 2)
        assert values[0] == 1
        assert float(values[1]) == pytest.approx(0.1353352832366127, rel=1e-15)
        assert float(values[2]) == pytest.approx(float(mpmath.exp(-6)), rel=1e-15)

    def test_negative_time(self, classical3):
        """Test t < 0 raises ValueError."""
        with pytest.raises(ValueError, match="nonnegative"):
            heat_eigenvalues(laplace(classical3), Fraction(-1), 3)


class TestCentralEigenvalue:
    """Tests for central_eigenvalue."""

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_examples(self, n):
        """Test λ_0 = 0, λ_1 = -1/N for b = 1 and λ_2 = -N/(N^2-1) for ν = δ_0."""
        zero = LevyMeasure()
        assert central_eigenvalue(n, Fraction(1), zero, 0) == 0
        assert central_eigenvalue(n, Fraction(1), zero, 1) == Fraction(-1, n)
        assert central_eigenvalue(n, Fraction(0), LevyMeasure.delta(0), 2) == Fraction(-n, n * n - 1)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_drift_monotone(self, n):
        """Test λ_s <= 0 with |λ_s| nondecreasing for s <= 20."""
        values = [central_eigenvalue(n, Fraction(1), LevyMeasure(), s) for s in range(21)]
        assert all(value <= 0 for value in values)
        assert all(abs(a) <= abs(b) for a, b in zip(values, values[1:]))

    def test_atom_at_n(self):
        """Test an atom at N is rejected."""
        with pytest.raises(AtomAtNormalizationPointError):
            central_eigenvalue(3, Fraction(0), LevyMeasure.delta(3), 2)


class TestConditionalPositivity:
    """Tests for is_conditionally_positive."""

    @pytest.mark.parametrize("b", [Fraction(0), Fraction(1)])
    def test_positive_measures_pass(self, b, positive_measures):
        """Test every positive pair passes up to degree 5."""
        for nu in positive_measures:
            report = is_conditionally_positive(LevyPair(b=b, nu=nu), 5)
            assert report.positive
            assert report.failing_index is None

    def test_drift_only_matrix_vanishes(self):
        """Test the drift contributes nothing on the doubly vanishing ideal."""
        report = is_conditionally_positive(LevyPair(b=1), 3)
        assert report.positive
        assert all(value == 0 for row in report.matrix for value in row)

    def test_rank_one_witness(self):
        """Test ν = δ_{1/2} gives M_jk = (1 - x0) x0^(j+k)."""
        half = Fraction(1, 2)
        report = is_conditionally_positive(LevyPair(nu=LevyMeasure.delta(half)), 3)
        assert report.matrix == tuple(tuple(half * half ** (j + k) for k in range(3)) for j in range(3))

    def test_zero_functional(self):
        """Test ν = 0, b = 0 passes."""
        assert is_conditionally_positive(LevyPair(), 2).positive

    def test_degree_must_be_positive(self):
        """Test degree 0 raises ValueError."""
        with pytest.raises(ValueError):
            is_conditionally_positive(LevyPair(), 0)

    @pytest.mark.parametrize(
        ("matrix", "failing"),
        [
            ([[Fraction(-1)]], 0),
            ([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]], 0),
            ([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(1)]], 1),
            ([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]], None),
            ([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]], None),
        ],
    )
    def test_psd_failure(self, matrix, failing):
        """Test the exact pivot test on small symmetric matrices."""
        assert _psd_failure(matrix) == failing

    def test_reversed_kernel_fails(self):
        """Test the opposite jump sign is not conditionally positive."""
        pair = LevyPair(nu=LevyMeasure.delta(Fraction(1, 2)))
        report = is_conditionally_positive(pair, 2)
        flipped = [[-value for value in row] for row in report.matrix]
        assert _psd_failure(flipped) == 0
