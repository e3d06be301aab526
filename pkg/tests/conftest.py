import numpy as np
import pytest

from rnldpc.qc_code import BUILTIN_CODES, builtin_code, expand


@pytest.fixture(scope="session")
def codes():
    """``codes[name][variant]`` for every built-in code."""
    return {name: {v: expand(builtin_code(name), v) for v in ("real", "binary")}
            for name in BUILTIN_CODES}


@pytest.fixture(scope="session")
def t1(codes):
    return codes["t1"]["real"]


@pytest.fixture(scope="session")
def r23(codes):
    return codes["wifi-r23"]["real"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record ``(label, ok, detail)`` for the acceptance summary, then assert ``ok``."""
    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
