"""Shared fixtures."""

import sys
from pathlib import Path

import pytest

# Add parent directory to path to import khovanov modules
sys.path.insert(0, str(Path(__file__).parent.parent))

CORPUS_DIR = Path(__file__).parent.parent / "corpus"

UNKNOT_FILE = """---
name: unknot
crossings: 0
components: 1
expected:
  even:
    - {i: 0, q: -1, free: 1}
    - {i: 0, q: 1, free: 1}
---
circles=1
"""

KINK_FILE = """---
name: unknot_kink
crossings: 1
components: 1
expected:
  even:
    - {i: 0, q: -1, free: 1}
    - {i: 0, q: 1, free: 1}
---
X(1,2,2,1)
"""


@pytest.fixture
def small_corpus(tmp_path):
    """A two-entry corpus in a temporary directory."""
    root = tmp_path / "corpus"
    root.mkdir()
    (root / "unknot.pd").write_text(UNKNOT_FILE, encoding="utf-8")
    (root / "unknot_kink.pd").write_text(KINK_FILE, encoding="utf-8")
    return root
