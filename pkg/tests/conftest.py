import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from netheat import fixtures  # noqa: E402


@pytest.fixture
def p3():
    return fixtures.p3()


@pytest.fixture
def star4():
    return fixtures.star4_inf()


@pytest.fixture
def k3pair():
    return fixtures.k3pair_inf()


@pytest.fixture
def ee():
    return fixtures.ee_inf()


@pytest.fixture(params=sorted(fixtures.GALLERY))
def any_fixture(request):
    return fixtures.GALLERY[request.param]()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
