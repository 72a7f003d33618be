import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from polylat.enumeration import EnsembleSpec, count_by_topology, count_tables


class TableCache:
    """Session-wide memo for topology tables; enumeration is the expensive
    part of the suite, so every test shares one pass per ensemble."""

    def __init__(self):
        self._tables = {}

    def get(self, cls, d, size, boundary="penetrable",
            convention="contains-origin"):
        key = (cls, d, size, boundary, convention)
        if key not in self._tables:
            # build both boundaries of the same view in one pass; the second
            # one is almost always wanted next
            variants = [(boundary, convention)]
            other = "impenetrable" if boundary == "penetrable" else "penetrable"
            if convention != "from-origin":
                variants.append((other, convention))
            built = count_tables(cls, d, size, variants)
            for (b, c), table in built.items():
                self._tables[(cls, d, size, b, c)] = table
        return self._tables[key]

    def summary_total(self, *key):
        return self.get(*key).total


@pytest.fixture(scope="session")
def tables():
    return TableCache()


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "extended: opt-in long reproductions (POLYLAT_EXTENDED=1)")


def extended_enabled() -> bool:
    return os.environ.get("POLYLAT_EXTENDED") == "1"
