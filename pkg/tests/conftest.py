from __future__ import annotations

from pathlib import Path

import pytest

from eufinterp.core import ProblemInstance, parse_problem
from eufinterp.interpolate import HornConjunction, parse_conjunction

DATA = Path(__file__).parent / "data"


def load_text(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


def load_problem(name: str) -> ProblemInstance:
    return parse_problem(load_text(name))


def expected_clauses(problem: ProblemInstance, text: str) -> frozenset:
    """Parse formula text against the problem's tables into a clause set.

    Literals are interned and normalized through the same term table, so
    clause-set equality is insensitive to equality orientation and to both
    conjunct and premise order.
    """
    conj = parse_conjunction(text, problem.table, problem.symbols)
    return frozenset(conj.clauses)


def clause_set(conj: HornConjunction) -> frozenset:
    return frozenset(conj.clauses)


@pytest.fixture
def data_dir() -> Path:
    return DATA
