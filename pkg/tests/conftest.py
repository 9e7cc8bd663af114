import pytest

from artifact.syntax import parse_program

# p(f(X1),X2) needs q(X1) and r(X1,X2); r only holds at a, q at b
P41 = "p(f(X1),X2) :- q(X1), r(X1,X2).\nr(a,a).\nq(b)."
P41_QA = "p(f(X1),X2) :- q(X1), r(X1,X2).\nr(a,a).\nq(a)."
SUM = "sum(0,X1,X1).\nsum(s(X1),X2,s(X3)) :- sum(X1,X2,X3)."
# p(X) and q(X) agree on ground instances but not on computed answers
P45 = "p(X).\np(a).\nq(X)."

_RESULTS: dict = {}


def record(criterion: int, ok: bool, detail: str = "") -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    _RESULTS[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_RESULTS):
            terminalreporter.write_line(_RESULTS[k])


@pytest.fixture
def p41():
    return parse_program(P41)


@pytest.fixture
def p41_qa():
    return parse_program(P41_QA)


@pytest.fixture
def sum_program():
    return parse_program(SUM)


@pytest.fixture
def p45():
    return parse_program(P45)
