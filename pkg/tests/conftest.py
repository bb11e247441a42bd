from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hllab.exponents import INF

ACCEPTANCE_LINES: list[str] = []

# exponents on a rational grid, plus infinity
EXPONENTS = [Fraction(1), Fraction(5, 4), Fraction(4, 3), Fraction(3, 2), Fraction(5, 3), Fraction(2),
             Fraction(5, 2), Fraction(3), Fraction(4), Fraction(6), Fraction(8), INF]
FINITE = [e for e in EXPONENTS if e != INF]


@st.composite
def signatures(draw, max_m=6):
    from hllab.exponents import SpaceSignature

    m = draw(st.integers(1, max_m))
    s = draw(st.sampled_from(FINITE))
    q = draw(st.sampled_from([e for e in EXPONENTS if e >= s]))
    p = tuple(draw(st.sampled_from(EXPONENTS)) for _ in range(m))
    return SpaceSignature(m, p, s, q)


@pytest.fixture
def acceptance():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
