import os
from pathlib import Path

import pytest

from automobius.maass import load_maass
from automobius.registry import CACHE_ENV, FormRegistry

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "fixtures" / "maass_r9p53.txt"
MAASS_ID = "maass:maass_r9p53"

# (criterion number, title, passed, detail), filled by test_acceptance
ACCEPTANCE = []


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else tmp_path_factory.mktemp("forms")


@pytest.fixture(scope="session")
def registry(cache_dir):
    r = FormRegistry(cache_dir)
    load_maass(FIXTURE, registry=r)
    return r


@pytest.fixture(scope="session")
def maass_dataset(registry):
    return registry.maass[MAASS_ID]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, title, passed, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"[{'PASS' if passed else 'FAIL'}] {num:>2}. {title}: {detail}")
