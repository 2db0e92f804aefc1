import json
from pathlib import Path

import pytest

from test.shared import CONSTANT_CIRCLE


@pytest.fixture
def weight_file(tmp_path: Path) -> Path:
    path = tmp_path / "weight.json"
    path.write_text(json.dumps(CONSTANT_CIRCLE))
    return path


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    return tmp_path / "out"
