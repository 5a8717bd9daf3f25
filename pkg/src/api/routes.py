"""FastAPI endpoints mirroring the CLI computations."""

import logging
from collections.abc import Callable
from fractions import Fraction
from typing import Any

from fastapi import APIRouter, HTTPException, Query, status
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.core.errors import SpectraError, describe_validation_error
from src.core.haar import parse_word
from src.core.levy import Generator, LevyPair, laplace
from src.core.measures import LevyMeasure
from src.core.sphere import Family, SphereKind
from src.services.reports import Report, ReportService
from src.utils.rational import Rational, parse_rational

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/spectra", tags=["spectra"])

# Global report service instance
reports = ReportService()

MAX_SMAX = 200


class SpectrumRequest(BaseModel):
    """Body of POST /spectra/spectrum."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: str
    N: int = Field(default=3, ge=2)
    b: Rational | None = None
    smax: int = Field(default=10, ge=0, le=MAX_SMAX)
    nu: LevyMeasure = Field(default_factory=LevyMeasure)


def _bad_request(error: Exception) -> HTTPException:
    if isinstance(error, SpectraError):
        detail = error.describe()
    elif isinstance(error, ValidationError):
        detail = describe_validation_error(error)
    else:
        detail = f"invalid argument: {error}"
    logger.warning(f"Rejected request: {detail}")
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=detail)


def _family(name: str, n: int) -> Family:
    return Family(SphereKind.parse(name), n)


def _generator(family: Family, b: str | Fraction | None, nu: LevyMeasure | None = None) -> Generator:
    if isinstance(b, str):
        b = parse_rational(b)
    if b is None and (nu is None or nu.is_zero()):
        return laplace(family)
    return Generator(family, LevyPair(b=b or Fraction(0), nu=nu or LevyMeasure()))


def _payload(build: Callable[[], Report]) -> dict[str, Any]:
    try:
        report = build()
    except ValueError as e:
        raise _bad_request(e) from e
    return report.payload


@router.get("/spectrum")
def get_spectrum(
    family: str,
    N: int = Query(3, ge=2),
    b: str | None = None,
    smax: int = Query(10, ge=0, le=MAX_SMAX),
) -> dict[str, Any]:
    """Spectrum of a drift generator (Laplace operator when b is omitted).

    Args:
        family: classical, half or free
        N: Ambient dimension
        b: Drift as "p/q"
        smax: Highest degree

    Returns:
        Spectrum JSON document
    """
    return _payload(lambda: reports.spectrum(_generator(_family(family, N), b), smax))


@router.post("/spectrum")
def post_spectrum(request: SpectrumRequest) -> dict[str, Any]:
    """Spectrum of a generator with a jump measure."""
    request.nu.screen_density()
    return _payload(
        lambda: reports.spectrum(_generator(_family(request.family, request.N), request.b, request.nu), request.smax)
    )


@router.get("/haar")
def get_haar(model: str, word: str, N: int = Query(3, ge=2)) -> dict[str, Any]:
    """Haar state of a word such as "u11^2 u22^2"."""
    return _payload(lambda: reports.haar(parse_word(word, _family(model, N))))


@router.get("/specdim")
def get_specdim(family: str, N: int = Query(3, ge=2), b: str | None = None) -> dict[str, Any]:
    """Spectral dimension of a drift generator."""
    return _payload(lambda: reports.specdim(_generator(_family(family, N), b)))
