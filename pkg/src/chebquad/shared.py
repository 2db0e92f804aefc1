import logging
from pathlib import Path
from typing import Annotated, Any, Sequence

import dask
import numpy as np
from dask.delayed import Delayed
from pydantic import BeforeValidator, PlainSerializer

from chebquad.errors import ChebQuadError
from chebquad.logging_chebquad import LOGGER
from chebquad.settings import SETTINGS


class FitError(ChebQuadError): ...


TWO_PI = 2.0 * np.pi


def assert_path_exists(path: Path | str) -> Path:
    path = Path(path)
    if not path.exists():
        LOGGER(exc_info=FileNotFoundError(f"path does not exist: {path}"))
    return path


def assert_file_exists(path: Path | str) -> Path:
    path = assert_path_exists(path)
    if not path.is_file():
        LOGGER(exc_info=ValueError(f"path is not a file: {path}"))
    return path


PathExistingFile = Annotated[Path, BeforeValidator(assert_file_exists), PlainSerializer(lambda x: str(x), return_type=str)]


def get_or_create_path(path: str | Path, **kwargs: Any) -> Path:
    path = Path(path)
    if not path.exists():
        LOGGER(f"creating path: {path}", level=logging.DEBUG)
        defaults = dict(exist_ok=True, parents=True)
        defaults.update(kwargs)
        path.mkdir(**defaults)
    return path


def wrap_angle(theta: np.ndarray | float) -> np.ndarray:
    """Reduce angles into [-pi, pi)."""
    return np.mod(np.asarray(theta, dtype=float) + np.pi, TWO_PI) - np.pi


def compute_ordered(tasks: Sequence[Delayed], num_workers: int | None = None) -> list[Any]:
    """Compute delayed tasks on the threaded scheduler. Results come back in task order.

    Parameters
    ----------
    tasks : Sequence[Delayed]
        Tasks to compute.
    num_workers : int | None, optional
        Thread count. Defaults to `SETTINGS.chebquad_threads`.
    """
    if len(tasks) == 0:
        return []
    num_workers = SETTINGS.chebquad_threads if num_workers is None else num_workers
    LOGGER(f"computing {len(tasks)} tasks with {num_workers=}", level=logging.DEBUG)
    with dask.config.set(scheduler="threads", num_workers=num_workers):
        return list(dask.compute(*tasks))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child generators derived from a single seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    x_arr = np.asarray(xs, dtype=float)
    y_arr = np.asarray(ys, dtype=float)
    if x_arr.size < 2 or x_arr.size != y_arr.size:
        LOGGER(exc_info=FitError(f"need at least two paired points to fit: {x_arr.size=} {y_arr.size=}"))
    if np.any(x_arr <= 0) or np.any(~np.isfinite(y_arr)) or np.any(y_arr <= 0):
        LOGGER(exc_info=FitError("power law fit requires positive finite data"))
    slope, _ = np.polyfit(np.log(x_arr), np.log(y_arr), 1)
    return float(slope)
