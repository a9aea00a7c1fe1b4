import pytest

from limavg.decision import Problem, Query, Verdict, regular_finite_value_Z
from limavg.errors import MisuseError
from limavg.generators import (CnfFormula, parse_dimacs, random_vass, running_example,
                               threesat_to_vass)
from limavg.graphs import reachable_states
from limavg.model import Domain


def test_running_example():
    vass, cost = running_example()
    assert (vass.num_states, len(vass.transitions), vass.dimension) == (3, 4, 2)
    assert cost.labels[vass.state_index("A")] == (4, 0)
    assert vass.initial == (vass.state_index("B"),)


def test_threesat_shape():
    vass, cost, lam = threesat_to_vass(CnfFormula(1, ((1, 1, 1),)))
    assert (vass.num_states, vass.dimension, lam) == (6, 2, 0)
    vass, _, _ = threesat_to_vass(CnfFormula(3, ((1, -2, 3), (-1, 2, 2))))
    assert vass.num_states == 4 + 6 + 1 and vass.dimension == 6
    with pytest.raises(MisuseError):
        threesat_to_vass(CnfFormula(1, ()))
    with pytest.raises(MisuseError):
        CnfFormula(1, ((1, 2, 1),))
    with pytest.raises(MisuseError):
        CnfFormula(1, ((1, 1),))


def test_threesat_examples():
    for phi, want in ((CnfFormula(1, ((1, 1, 1),)), Verdict.YES),
                      (CnfFormula(1, ((1, 1, 1), (-1, -1, -1))), Verdict.NO)):
        vass, cost, _ = threesat_to_vass(phi)
        assert regular_finite_value_Z(Query(vass, cost, Problem.REGULAR_FINITE)).verdict is want
        assert phi.satisfiable() == (want is Verdict.YES)


def test_dimacs():
    phi = parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2\n0\n")
    assert phi == CnfFormula(2, ((1, -2, 1), (2, 2, 2)))
    assert parse_dimacs("p cnf 3 1\n1 2 3 0") == CnfFormula(3, ((1, 2, 3),))
    for bad in ("1 2 0", "p dnf 1 1\n1 0", "p cnf 1 1\n1 2 0"):
        with pytest.raises(MisuseError):
            parse_dimacs(bad)


def test_random_vass():
    a = random_vass(4, 6, 2, seed=99)
    b = random_vass(4, 6, 2, seed=99)
    assert a == b
    vass, cost = a
    assert vass.num_states == 4 and len(vass.transitions) == 6
    assert reachable_states(vass) == set(range(4))
    assert all(0 <= c <= 2 for lab in cost.labels for c in lab)
    assert all(-2 <= u <= 2 for t in vass.transitions for u in t.update)
    vass, _ = random_vass(2, 3, 1, seed=1, domain=Domain.NATURAL)
    assert vass.domain is Domain.NATURAL
    assert random_vass(4, 6, 2, seed=100) != a
    for args in ((0, 1, 1), (3, 1, 1), (2, 2, 0)):
        with pytest.raises(MisuseError):
            random_vass(*args)
    with pytest.raises(MisuseError):
        random_vass(2, 2, 1, coef_range=(-1, 2))
