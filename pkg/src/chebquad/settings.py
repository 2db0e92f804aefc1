from enum import StrEnum, unique

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


@unique
class LogLevel(StrEnum):
    """Log level enum. Used to wrap standard `logging` levels.

    Attributes
    ----------
    INFO : str
        Equivalent to `logging.INFO`.
    DEBUG : str
        Equivalent to `logging.DEBUG`.
    """

    INFO = "info"
    DEBUG = "debug"


class ChebQuadSettings(BaseSettings):
    """Process-wide settings read from the environment.

    Attributes
    ----------
    chebquad_log_level : LogLevel
        Level of the project logger.
    chebquad_threads : int
        Maximum number of threads used when sweeps or solver restarts are dispatched concurrently.
    chebquad_degree_cap : int
        Largest trigonometric polynomial degree that products and powers may produce.
    chebquad_default_tol : float
        Default relative tolerance for weighted integrals.
    chebquad_mass_tol : float
        Relative tolerance used when computing and caching total masses.
    """

    model_config = SettingsConfigDict(frozen=True)

    chebquad_log_level: LogLevel = LogLevel.INFO
    chebquad_threads: int = Field(default=1, ge=1)
    chebquad_degree_cap: int = Field(default=4096, ge=1)
    chebquad_default_tol: float = Field(default=1e-10, gt=0)
    chebquad_mass_tol: float = Field(default=1e-12, gt=0)

    @field_validator("chebquad_log_level", mode="before")
    @classmethod
    def _validate_chebquad_log_level_(cls, value: str) -> LogLevel:
        return LogLevel(value.lower())


SETTINGS = ChebQuadSettings()
