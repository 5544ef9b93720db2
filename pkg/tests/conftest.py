from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
CORPORA = REPO_ROOT / "corpora"
FIXTURES = TESTS_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))  # makes `oracles` importable


@pytest.fixture(scope="session")
def registry():
    from texmathc import default_registry

    return default_registry()


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep every test's render cache in its own temp directory."""
    monkeypatch.setenv("TEXMATHC_CACHE_DIR", str(tmp_path / "cache"))
