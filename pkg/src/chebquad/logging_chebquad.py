"""Project logger. Configured once at import from `SETTINGS`."""

import functools
import inspect
import logging
import logging.config
import time
from typing import Any, Callable, ParamSpec, TypeVar

from chebquad.settings import SETTINGS, LogLevel

_PROJECT_NAME = "chebquad"
# Numerical warnings from scipy (IntegrationWarning, OptimizeWarning) arrive through this logger.
_WARNINGS_LOGGER = "py.warnings"


def _logging_config(log_level: LogLevel) -> dict[str, Any]:
    level = getattr(logging, log_level.value.upper())
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "plain": {"format": "[%(name)s][%(levelname)s][%(asctime)s][%(filename)s:%(lineno)d][%(threadName)s]: %(message)s"},
        },
        "handlers": {
            "stderr": {"formatter": "plain", "class": "logging.StreamHandler", "stream": "ext://sys.stderr"},
        },
        "loggers": {
            _PROJECT_NAME: {"handlers": ["stderr"], "level": level},
            _WARNINGS_LOGGER: {"handlers": ["stderr"], "level": logging.WARNING, "propagate": False},
        },
    }


class LoggerWrapper:
    """Callable front of the `chebquad` logger.

    `LOGGER("text")` logs at INFO. `LOGGER(exc_info=SomeError(...))` logs the error at ERROR and raises it,
    so every failure in the package is on the log before it propagates.
    """

    logger: logging.Logger | None = None

    def __call__(
        self,
        msg: str | None = None,
        level: int = logging.INFO,
        exc_info: Exception | None = None,
        stacklevel: int = 2,
    ) -> None:
        if exc_info is None:
            if msg is None:
                raise ValueError("msg required if exc_info is not provided")
            self._get_logger_().log(level, msg, stacklevel=stacklevel)
            return
        self._get_logger_().error(msg or f"{type(exc_info).__name__}: {exc_info}", exc_info=exc_info, stacklevel=stacklevel)
        raise exc_info

    def initialize(self, log_level: LogLevel = LogLevel.INFO, again: bool = False) -> None:
        if self.logger is not None and not again:
            raise RuntimeError("logger already initialized and again is False")
        logging.config.dictConfig(_logging_config(log_level))
        logging.captureWarnings(True)
        self.logger = logging.getLogger(_PROJECT_NAME)
        self(f"logging initialized at {log_level}", level=logging.DEBUG)

    def _get_logger_(self) -> logging.Logger:
        if self.logger is None:
            raise RuntimeError("logger used before initialize")
        return self.logger


LOGGER = LoggerWrapper()
LOGGER.initialize(log_level=SETTINGS.chebquad_log_level)
LOGGER(f"{SETTINGS=}", level=logging.DEBUG)


P = ParamSpec("P")
R = TypeVar("R")


def _scalar_arguments(signature: inspect.Signature, args: tuple, kwargs: dict) -> str:
    bound = signature.bind_partial(*args, **kwargs)
    shown = [f"{k}={v}" for k, v in bound.arguments.items() if isinstance(v, (int, float, str)) and not isinstance(v, bool)]
    return ", ".join(shown)


def log_it(func: Callable[P, R]) -> Callable[P, R]:
    """Log entry and wall time of a numerical operation at DEBUG, with its scalar arguments (degree, node count, ...)."""
    signature = inspect.signature(func)

    @functools.wraps(func)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        call = f"{func.__qualname__}({_scalar_arguments(signature, args, kwargs)})"
        LOGGER(f"start {call}", level=logging.DEBUG, stacklevel=3)
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        LOGGER(f"done {call} in {time.perf_counter() - start_time:.4f}s", level=logging.DEBUG, stacklevel=3)
        return result

    return wrapper
