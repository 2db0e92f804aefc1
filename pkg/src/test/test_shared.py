from pathlib import Path

import dask
import numpy as np
import pytest

from chebquad.shared import FitError, assert_file_exists, compute_ordered, fit_power_law, get_or_create_path, spawn_rngs, wrap_angle


def test_assert_file_exists_with_valid_file(tmp_path: Path) -> None:
    test_file = tmp_path / "test_file.txt"
    test_file.touch()

    result = assert_file_exists(test_file)
    assert result == test_file
    assert result.is_file()


def test_assert_file_exists_with_nonexistent_path(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        assert_file_exists(tmp_path / "nonexistent.txt")


def test_assert_file_exists_with_directory(tmp_path: Path) -> None:
    test_dir = tmp_path / "test_dir"
    test_dir.mkdir()

    with pytest.raises(ValueError, match="path is not a file"):
        assert_file_exists(test_dir)


def test_get_or_create_path(tmp_path: Path) -> None:
    target = tmp_path / "a" / "b"
    assert get_or_create_path(target) == target
    assert target.is_dir()


def test_wrap_angle() -> None:
    wrapped = wrap_angle(np.array([np.pi, -np.pi, 0.5, 7.0]))
    assert np.allclose(wrapped, [-np.pi, -np.pi, 0.5, 7.0 - 2 * np.pi])


def test_compute_ordered_keeps_task_order() -> None:
    tasks = [dask.delayed(lambda x: x * x)(ii) for ii in range(10)]
    assert compute_ordered(tasks, num_workers=4) == [ii * ii for ii in range(10)]
    assert compute_ordered([]) == []


def test_spawn_rngs_is_deterministic() -> None:
    first = [rng.standard_normal() for rng in spawn_rngs(7, 3)]
    second = [rng.standard_normal() for rng in spawn_rngs(7, 3)]
    assert first == second
    assert len(set(first)) == 3


def test_fit_power_law() -> None:
    xs = [8, 16, 32, 64]
    assert fit_power_law(xs, [3.0 * x**2 for x in xs]) == pytest.approx(2.0)


@pytest.mark.parametrize("ys", [[1.0], [1.0, -1.0], [1.0, np.inf]])
def test_fit_power_law_degenerate(ys: list[float]) -> None:
    with pytest.raises(FitError):
        fit_power_law([1.0, 2.0][: len(ys)], ys)
