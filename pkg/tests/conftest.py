import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tracekit import build_graph, load_file  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def clean_model():
    return load_file(FIXTURES / "clean.sreq")


@pytest.fixture
def chain_model():
    return load_file(FIXTURES / "chain.sreq")


@pytest.fixture
def chain_graph(chain_model):
    return build_graph(chain_model)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
