"""API package initialization."""

from src.api.routes import router as spectra_router

__all__ = ["spectra_router"]
