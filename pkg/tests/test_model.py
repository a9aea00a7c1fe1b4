import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from limavg.errors import StructureError
from limavg.generators import random_vass, running_example
from limavg.model import (NEG_INFINITY, POS_INFINITY, Configuration, CostFunction, Domain,
                          ExtendedValue, Lasso, Vass, check_lasso, check_path, dot,
                          path_summary, simulate, sum_from, transition_counts,
                          transition_matrix, vadd)


@pytest.fixture
def ae():
    vass, cost = running_example()
    return vass, cost, lambda s: vass.path_from_names(s.split())


def test_summary_examples(ae):
    vass, cost, P = ae
    assert path_summary(vass, cost, P("e1 e2 e3 e4")) == ((-1, 2), (6, 3))
    assert path_summary(vass, cost, ()) == ((0, 0), (0, 0))
    assert path_summary(vass, cost, P("e1 e2")) == ((1, -1), (5, 1))


def test_sum_from_examples(ae):
    vass, cost, P = ae
    assert sum_from(vass, cost, (0, 0), P("e1 e2 e3 e4")) == 6
    assert sum_from(vass, cost, (5, -7), ()) == 0
    # shift of one (e3 e4) block
    assert sum_from(vass, cost, (-2, 3), P("e1 e2 e3 e4")) == 3


def test_simulate_examples(ae):
    vass, _, P = ae
    run = simulate(vass, Configuration(1, (0, 0)), P("e1"))
    assert run.configurations == (Configuration(1, (0, 0)), Configuration(0, (1, 0)))
    start = Configuration(2, (4, 4))
    assert simulate(vass, start, ()).configurations == (start,)
    down = Vass.build(1, ["q"], ["q"], [("d", "q", "q", (-1,))], Domain.NATURAL)
    assert simulate(down, Configuration(0, (0,)), (0,)).first_negative == 1


def test_structural_errors(ae):
    vass, cost, P = ae
    with pytest.raises(StructureError):
        Vass.build(1, ["a"], ["a"], [("t", "a", "b", (1,))])
    with pytest.raises(StructureError):
        Vass.build(1, ["a"], [], [])
    with pytest.raises(StructureError):
        Vass.build(2, ["a"], ["a"], [("t", "a", "a", (1,))])
    with pytest.raises(StructureError):
        CostFunction.for_vass(vass, [(1, 0), (0, -1), (0, 0)])
    with pytest.raises(StructureError):
        path_summary(vass, cost, P("e1 e3"))
    with pytest.raises(StructureError):
        sum_from(vass, cost, (0,), P("e1"))
    with pytest.raises(StructureError):
        check_lasso(vass, Lasso((), P("e1")))  # not a cycle
    with pytest.raises(StructureError):
        check_path(vass, P("e1 e3"))
    assert check_path(vass, ()) is None


def test_transition_matrix_identity(ae):
    vass, cost, P = ae
    A = transition_matrix(vass, cost)
    for names in ("e1 e2", "e3 e4", "e1 e2 e3 e4", "e3 e4 e3 e4 e1 e2"):
        path = P(names)
        x = transition_counts(vass, path)
        g, v = path_summary(vass, cost, path)
        assert sum(A[i][j] * x[i] * x[j] for i in range(4) for j in range(4)) == 2 * dot(g, v)


def test_extended_value_order():
    half = ExtendedValue.of(Fraction(1, 2))
    assert NEG_INFINITY < -10**9 < half < POS_INFINITY
    assert half == Fraction(1, 2) and half <= 1 and half > 0
    assert str(NEG_INFINITY) == "-inf" and str(POS_INFINITY) == "+inf"
    assert str(ExtendedValue.of(Fraction(6, 4))) == "3/2"
    with pytest.raises(StructureError):
        ExtendedValue(0)


def _random_path(seed, length):
    rng = random.Random(seed)
    vass, cost = random_vass(rng.randint(1, 4), rng.randint(3, 7), rng.randint(1, 3),
                             seed=seed)
    cur, path = rng.choice(vass.initial), []
    for _ in range(length):
        i = rng.choice(vass.out_edges[cur]) if vass.out_edges[cur] else None
        if i is None:
            break
        path.append(i)
        cur = vass.transitions[i].target
    return vass, cost, tuple(path), rng


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 12), st.integers(0, 12))
def test_additivity_and_sum_laws(seed, n1, n2):
    vass, cost, path, rng = _random_path(seed, n1 + n2)
    k = min(n1, len(path))
    t1, t2 = path[:k], path[k:]
    g1, v1 = path_summary(vass, cost, t1)
    g2, v2 = path_summary(vass, cost, t2)
    assert path_summary(vass, cost, path) == (vadd(g1, g2), vadd(v1, v2))
    g = tuple(rng.randint(-9, 9) for _ in range(vass.dimension))
    h = tuple(rng.randint(-9, 9) for _ in range(vass.dimension))
    assert sum_from(vass, cost, g, path) == \
        sum_from(vass, cost, g, t1) + sum_from(vass, cost, vadd(g, g1), t2)
    _, vals = path_summary(vass, cost, path)
    assert sum_from(vass, cost, vadd(g, h), path) == dot(g, vals) + sum_from(vass, cost, h, path)
    start = Configuration(vass.transitions[path[0]].source if path else 0, g)
    gain, _ = path_summary(vass, cost, path)
    assert simulate(vass, start, path).final.counters == vadd(g, gain)
