from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from conecalc.config import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; each test sees the current environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
