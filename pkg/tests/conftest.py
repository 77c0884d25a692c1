import functools

import pytest

from paleyclique.ffield import build_field, field_for_q
from paleyclique.paley import build_paley

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def paley(q: int):
    return build_paley(field_for_q(q))


@pytest.fixture
def F13():
    return build_field(13)


@pytest.fixture
def F125():
    return build_field(5, 3)


@pytest.fixture(autouse=True)
def _isolated_store(tmp_path, monkeypatch):
    monkeypatch.setenv("PALEY_STORE", str(tmp_path / "store.csv"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
