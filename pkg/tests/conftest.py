import pytest

from equivloc import corpus
from equivloc.exactmath import parse_polynomial


@pytest.fixture(scope="session")
def docs():
    return corpus.load_all()


def poly(text, variables=("u",)):
    return parse_polynomial(text, variables)


def row(texts, variables=("u",)):
    return [parse_polynomial(t, variables) for t in texts]


# acceptance results, reported once at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
