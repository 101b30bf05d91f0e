from pathlib import Path

import pytest

from pde2ode import (parametric_derivatives, parse_expr, parse_system,
                     reduce_to_parametric_ode, rif)

ROOT = Path(__file__).resolve().parents[1]
SYSTEMS = ROOT / "systems"

# Lines reported by tests/test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE = []


def load(name):
    return parse_system((SYSTEMS / name).read_text())


def poly(text, sig):
    """Parse a polynomial (no division) against a signature."""
    e = parse_expr(text, sig)
    assert e.den == 1, text
    return e.num


@pytest.fixture(scope="session")
def ex1_src():
    return load("example1.pde")


@pytest.fixture(scope="session")
def ex1(ex1_src):
    return rif(ex1_src)


@pytest.fixture(scope="session")
def ex1_ode(ex1):
    return reduce_to_parametric_ode(ex1)


@pytest.fixture(scope="session")
def det_src():
    return load("detsys_rif.pde")


@pytest.fixture(scope="session")
def det(det_src):
    return rif(det_src)


@pytest.fixture(scope="session")
def det_data(det):
    return parametric_derivatives(det)


@pytest.fixture(scope="session")
def det_ode(det):
    return reduce_to_parametric_ode(det)


@pytest.fixture
def accept():
    def report(number, title, ok, detail=""):
        line = "%s  [%2d] %s%s" % ("PASS" if ok else "FAIL", number, title,
                                   "  (%s)" % detail if detail else "")
        ACCEPTANCE.append((number, line))
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
