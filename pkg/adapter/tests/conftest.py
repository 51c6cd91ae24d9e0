import shutil
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture()
def warm_cache(tmp_path) -> Path:
    """Writable copy of the committed tool cache."""
    target = tmp_path / "cache"
    shutil.copytree(FIXTURES / "cache", target)
    return target
