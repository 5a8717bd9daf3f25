"""Configuration management using Pydantic settings."""

from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """HTTP server settings loaded from environment variables.

    Only the ``serve`` command and the FastAPI app read these; computational
    commands never consult the environment.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SPECTRA_",
        case_sensitive=False,
        extra="ignore",
    )

    # Server Configuration
    server_host: str = Field(default="0.0.0.0", description="API server host")
    server_port: int = Field(default=2010, description="API server port")
    log_level: str = Field(default="INFO", description="Root log level for the server")


class Limits(BaseModel):
    """Compiled-in numerical limits shared by the library, CLI and API."""

    model_config = ConfigDict(frozen=True)

    # Word-length caps per pairing variant (exact Gram inversion cost)
    max_word_all: int = Field(default=8, description="Longest word for the classical engine")
    max_word_balanced: int = Field(default=10, description="Longest word for the half-liberated engine")
    max_word_noncrossing: int = Field(default=12, description="Longest word for the free engine")

    # Floating-point outputs
    heat_precision_bits: int = Field(default=80, description="mpmath working precision for exponentials")
    float_digits: int = Field(default=17, description="Significant digits for float output")

    # Spectral dimension
    regression_tolerance: float = Field(default=0.05, description="Allowed relative gap, exact vs regressed")
    jump_regression_tolerance: float = Field(default=0.10, description="Allowed gap before a ν ≠ 0 downgrade")
    regression_smax: int = Field(default=400, description="Regression window end for drift-only generators")
    jump_regression_smax: int = Field(default=40, description="Regression window end when ν ≠ 0")

    # Lévy measure density screen
    density_samples: int = Field(default=33, description="Equispaced samples per density piece")


# Global settings instance
settings = Settings()

# Global limits instance
limits = Limits()
