import os

os.environ["GALOIS_SIEVE_THREADS"] = "1"
os.environ.setdefault("LOG_LEVEL", "WARNING")

import pytest

from src.core.config import slow_tests_enabled


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: minute-scale runs, set GALOIS_SIEVE_SLOW_TESTS=1")


def pytest_collection_modifyitems(config, items):
    if slow_tests_enabled():
        return
    skip_slow = pytest.mark.skip(reason="set GALOIS_SIEVE_SLOW_TESTS=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
