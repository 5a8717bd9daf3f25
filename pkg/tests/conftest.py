"""Pytest configuration and shared fixtures."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from src.core.measures import LevyMeasure
from src.core.sphere import Family, SphereKind

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def classical3():
    """The round 2-sphere, N = 3."""
    return Family(SphereKind.CLASSICAL, 3)


@pytest.fixture
def free2():
    """Free sphere at N = 2."""
    return Family(SphereKind.FREE, 2)


@pytest.fixture
def positive_measures():
    """Jump measures used for the sign and positivity checks."""
    return [
        LevyMeasure.delta(-1),
        LevyMeasure.delta(0),
        LevyMeasure.delta(Fraction(1, 2)),
        LevyMeasure.uniform(),
    ]


@pytest.fixture
def nu_file(tmp_path):
    """Write a Lévy measure JSON file and return its path."""

    def _write(document: dict, name: str = "nu.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def golden():
    """Read a golden file from tests/golden."""

    def _read(name: str) -> str:
        return (GOLDEN_DIR / name).read_text(encoding="utf-8")

    return _read
