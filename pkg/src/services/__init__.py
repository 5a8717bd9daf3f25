"""Service package initialization."""

from src.services.reports import OutputFormat, Report, ReportService
from src.services.verification import CheckResult, VerificationService

__all__ = [
    "CheckResult",
    "OutputFormat",
    "Report",
    "ReportService",
    "VerificationService",
]
