import pytest

from bkrel import lattice as lt
from bkrel.relation import DomainSig, Relation

UNIT = [lt.Godel(), lt.Lukasiewicz(), lt.Product(), lt.NilpotentMin()]
FINITE = [lt.boolean(), lt.lukasiewicz_chain(3), lt.godel_chain(3)]
ALL = UNIT + FINITE


def ids(lats):
    return [l.name for l in lats]


def rel(lat, rows, src="A", tgt="B", name="R"):
    n, m = len(rows), len(rows[0])
    return Relation(lat, rows, DomainSig.range(src, n), DomainSig.range(tgt, m), name)


@pytest.fixture(params=ALL, ids=ids(ALL))
def any_lattice(request):
    return request.param


@pytest.fixture(params=UNIT, ids=ids(UNIT))
def unit_lattice(request):
    return request.param


# ---- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
