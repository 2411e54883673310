import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make generators importable

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def bench_dir() -> Path:
    """Directory with user-supplied benchmark INP files, if any."""
    return Path(os.environ.get("STRUCSENSE_BENCH_DIR", REPO_ROOT / "benchmarks"))
