"""Exception hierarchy for the spectral computations.

Every error carries a short ``prefix`` used verbatim by the CLI and the HTTP
layer, so a failure always reads ``"<prefix>: <message>"``.
"""

from pydantic import ValidationError


class SpectraError(ValueError):
    """Base class for all domain errors."""

    prefix = "error"

    def describe(self) -> str:
        """Single-line diagnostic with the error prefix."""
        message = " ".join(str(self).split())
        return f"{self.prefix}: {message}"


class NonNormalizedPolynomialError(SpectraError):
    prefix = "non-normalized polynomial"


class SingularMomentError(SpectraError):
    prefix = "singular Hankel"


class SingularGramError(SpectraError):
    prefix = "singular Gram"


class WordLengthError(SpectraError):
    prefix = "length cap"


class WordSyntaxError(SpectraError):
    prefix = "malformed word"


class MalformedRationalError(SpectraError):
    prefix = "malformed rational"


class MeasureError(SpectraError):
    prefix = "invalid measure"


class AtomAtNormalizationPointError(MeasureError):
    prefix = "atom at normalization point"


class DegenerateGeneratorError(SpectraError):
    prefix = "degenerate generator"


class SpectralDimensionMismatchError(SpectraError):
    prefix = "dimension mismatch"


class UsageError(SpectraError):
    prefix = "usage"


class UnknownCommandError(UsageError):
    prefix = "unknown command"


def describe_validation_error(error: ValidationError) -> str:
    """One-line text for a pydantic ValidationError.

    A domain error raised inside a validator keeps its own prefix; anything
    else reads ``"invalid argument: <field>: <message>"``.
    """
    details = error.errors()
    if not details:
        return f"invalid argument: {error}"
    first = details[0]
    cause = first.get("ctx", {}).get("error")
    if isinstance(cause, SpectraError):
        return cause.describe()
    where = ".".join(str(part) for part in first.get("loc", ()))
    message = " ".join(str(first.get("msg", "")).split())
    return f"invalid argument: {where}: {message}" if where else f"invalid argument: {message}"
