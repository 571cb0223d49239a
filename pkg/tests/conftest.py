import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from autolex import FamilyDataset  # noqa: E402


@pytest.fixture
def toy():
    """Three languages, three meanings, one gap."""
    return FamilyDataset.from_mapping({
        "a": {"one": "cat", "two": "sun", "three": "tres"},
        "b": {"one": "bat", "two": "sun", "three": "three"},
        "c": {"one": "cat", "two": "son"},
    }, meanings=["one", "two", "three"])
