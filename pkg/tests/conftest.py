import json
from pathlib import Path

import pytest

from webcalc.scalar_field import FieldElem, LaurentPoly

FROZEN = json.loads((Path(__file__).parent / "data" / "frozen_oracles.json").read_text())

ACCEPTANCE_LINES: list[str] = []


def from_terms(terms) -> FieldElem:
    """FieldElem from the frozen [[exponents, coeff], ...] format."""
    return FieldElem.from_poly(LaurentPoly({tuple(e): c for e, c in terms}))


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
