"""The three spheres and their orthogonal quantum groups."""

from dataclasses import dataclass
from enum import StrEnum


class SphereKind(StrEnum):
    """Which sphere (equivalently which quantum group O_N, O_N^*, O_N^+)."""

    CLASSICAL = "classical"
    HALF_LIBERATED = "half"
    FREE = "free"

    @classmethod
    def parse(cls, text: str) -> "SphereKind":
        """Read a family name, accepting a few long spellings."""
        aliases = {
            "classical": cls.CLASSICAL,
            "half": cls.HALF_LIBERATED,
            "half-liberated": cls.HALF_LIBERATED,
            "halfliberated": cls.HALF_LIBERATED,
            "free": cls.FREE,
        }
        key = text.strip().lower()
        if key not in aliases:
            raise ValueError(f"unknown family {text!r}; expected classical, half or free")
        return aliases[key]


@dataclass(frozen=True)
class Family:
    """A sphere together with its ambient dimension N."""

    kind: SphereKind
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"ambient dimension must be at least 2, got N={self.n}")

    def __str__(self) -> str:
        return f"{self.kind.value}(N={self.n})"
