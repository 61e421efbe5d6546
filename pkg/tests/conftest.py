import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from recollem.exactla import QQ
from recollem.io import algebra_from_json, category_from_json, load_json

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = ROOT / "golden"

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")


def load_cat(name, field=QQ):
    return category_from_json(load_json(FIXTURES / f"{name}.json"), field)


def load_alg(name, field=QQ):
    return algebra_from_json(load_json(FIXTURES / f"{name}.json"), field)


@pytest.fixture(scope="session")
def a2():
    return load_cat("a2")


@pytest.fixture(scope="session")
def a3():
    return load_cat("a3")


@pytest.fixture(scope="session")
def a3rel():
    return load_cat("a3rel")


@pytest.fixture(scope="session")
def ut2():
    return load_alg("ut2")


@pytest.fixture(scope="session")
def kxk():
    return load_alg("kxk")


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
