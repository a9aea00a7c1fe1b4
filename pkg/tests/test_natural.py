from fractions import Fraction

import pytest

from limavg.decision import Budget, Problem, Query, Verdict
from limavg.errors import MisuseError, StructureError, UnsupportedProblem
from limavg.generators import random_vass
from limavg.model import Configuration, CostFunction, Domain, Vass, simulate
from limavg.natural import (configuration_bounds, finite_value_gadget,
                            reachability_to_average_N, regular_finite_value_N,
                            uniform_average_N)
from limavg.reach_n import ReachQuery, ReachStatus, reachable
from limavg.semantics import lasso_value


def loop(updates, domain=Domain.NATURAL):
    return Vass.build(1, ["q"], ["q"], [(f"l{i}", "q", "q", (u,)) for i, u in enumerate(updates)],
                      domain)


def test_uniform_examples():
    assert uniform_average_N(loop([0]), (1,), 0).verdict is Verdict.YES
    ans = uniform_average_N(loop([1, -1]), (1,), Fraction(1, 2))
    assert ans.verdict is Verdict.YES
    run = simulate(loop([1, -1]), Configuration(0, (0,)), ans.witness.prefix + ans.witness.cycle)
    assert run.first_negative is None
    assert lasso_value(loop([1, -1]), CostFunction.uniform(loop([1, -1]), (1,)),
                       ans.witness).value <= Fraction(1, 2)
    assert uniform_average_N(loop([1, -1]), (1,), Fraction(1, 4)).verdict is Verdict.NO
    assert uniform_average_N(loop([1]), (1,), 3).verdict is Verdict.NO
    assert uniform_average_N(loop([0]), (1,), -1).verdict is Verdict.NO


def test_uniform_errors_and_caps():
    with pytest.raises(UnsupportedProblem):
        uniform_average_N(loop([0]), (0,), 1)
    with pytest.raises(MisuseError):
        uniform_average_N(loop([0], Domain.INTEGER), (1,), 1)
    with pytest.raises(MisuseError):
        uniform_average_N(loop([0]), (1, 1), 1)
    ans = uniform_average_N(loop([1, -1]), (1,), 50, max_configs=10)
    assert ans.verdict is Verdict.UNKNOWN


def test_configuration_bounds():
    assert configuration_bounds(loop([1, -1]), (1,), Fraction(0)) == (0,)
    # low = 1, L = 2·1·2 = 4, U = 1
    assert configuration_bounds(loop([1, -1]), (1,), Fraction(1, 2)) == (5,)
    assert configuration_bounds(loop([-1]), (1,), Fraction(1, 2)) == (1,)


def test_reduction_structure():
    vass, _ = random_vass(3, 5, 2, (-1, 1), (0, 1), 4, Domain.NATURAL)
    out, cost, lam = reachability_to_average_N(vass, 0, 2)
    assert out.num_states == vass.num_states + 2 and out.dimension == vass.dimension + 1
    assert lam == 0 and cost.is_uniform and cost.labels[0] == (1, 1, 1)
    qf = out.num_states - 1
    loops = [t for t in out.transitions if t.source == qf and t.target == qf]
    assert sorted(t.update for t in loops) == [(0, 0, -1), (0, 0, 0)]
    assert out.initial == (out.num_states - 2,)
    with pytest.raises(MisuseError):
        reachability_to_average_N(loop([0], Domain.INTEGER), 0, 0)
    with pytest.raises(MisuseError):
        reachability_to_average_N(vass, Configuration(0, (1, 0)), 2)


def test_reduction_examples():
    v = loop([0])
    out, cost, lam = reachability_to_average_N(v, "q", "q")
    assert uniform_average_N(out, (1, 1), lam).verdict is Verdict.YES
    # two states, only a +1 edge back: (r, 0) unreachable from (q, 0)
    v = Vass.build(1, ["q", "r"], ["q"], [("up", "q", "r", (1,)), ("stay", "r", "r", (1,))],
                   Domain.NATURAL)
    out, cost, lam = reachability_to_average_N(v, "q", "r")
    direct = reachable(ReachQuery(v, Configuration(0, (0,)), Configuration(1, (0,)), 2000))
    got = uniform_average_N(out, (1, 1), lam, Budget(reach_budget=2000)).verdict
    assert direct.status is not ReachStatus.REACHABLE and got is not Verdict.YES


def test_finite_value_examples():
    b = Budget(reach_budget=5000)
    for updates, want in (([0], {Verdict.YES}), ([1], {Verdict.UNKNOWN}),
                          ([1, -1], {Verdict.YES})):
        v = loop(updates)
        cost = CostFunction.uniform(v, (1,))
        ans = regular_finite_value_N(Query(v, cost, Problem.REGULAR_FINITE, None, b))
        assert ans.verdict in want
        if ans.verdict is Verdict.YES:
            assert lasso_value(v, cost, ans.witness).value.kind == 0
    acyclic = Vass.build(1, ["q", "r"], ["q"], [("t", "q", "r", (1,))], Domain.NATURAL)
    ans = regular_finite_value_N(Query(acyclic, CostFunction.uniform(acyclic, (1,)),
                                       Problem.REGULAR_FINITE))
    assert ans.verdict is Verdict.NO
    with pytest.raises(MisuseError):
        z = loop([0], Domain.INTEGER)
        regular_finite_value_N(Query(z, CostFunction.uniform(z, (1,)), Problem.REGULAR_FINITE))


def test_finite_value_unread_counter_may_grow():
    # counter 1 grows forever but the cost never reads it
    v = Vass.build(2, ["q"], ["q"], [("l", "q", "q", (0, 1))], Domain.NATURAL)
    cost = CostFunction.for_vass(v, [(1, 0)])
    ans = regular_finite_value_N(Query(v, cost, Problem.REGULAR_FINITE, None,
                                       Budget(reach_budget=5000)))
    assert ans.verdict is Verdict.YES
    g = finite_value_gadget(v, cost, ())
    assert g.dimension == 4 and g.states[-1] == "check"


def test_reach_examples():
    plus = loop([1])
    q0 = Configuration(0, (0,))
    assert reachable(ReachQuery(plus, q0, q0)) .path == ()
    res = reachable(ReachQuery(plus, q0, Configuration(0, (3,))))
    assert res.status is ReachStatus.REACHABLE and res.path == (0, 0, 0)
    res = reachable(ReachQuery(plus, Configuration(0, (1,)), q0, budget=50))
    assert res.status is ReachStatus.UNKNOWN
    res = reachable(ReachQuery(plus, Configuration(0, (1,)), q0, counter_cap=(10,)))
    assert res.status is ReachStatus.UNKNOWN
    down = loop([-1])
    res = reachable(ReachQuery(down, Configuration(0, (3,)), Configuration(0, (5,))))
    assert res.status is ReachStatus.NOT_REACHABLE
    with pytest.raises(StructureError):
        ReachQuery(plus, Configuration(0, (-1,)), q0)
    with pytest.raises(StructureError):
        ReachQuery(plus, q0, q0, budget=0)


def test_reach_determinism_and_validity():
    for seed in range(20):
        vass, _ = random_vass(3, 6, 2, (-1, 2), (0, 1), seed, Domain.NATURAL)
        q = ReachQuery(vass, Configuration(0, (0, 0)), Configuration(vass.num_states - 1, (1, 1)),
                       budget=3000)
        a, b = reachable(q), reachable(q)
        assert a == b
        if a.status is ReachStatus.REACHABLE:
            run = simulate(vass, q.source, a.path)
            assert run.first_negative is None and run.final == q.target
