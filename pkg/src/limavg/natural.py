"""Procedures for VASS over the naturals, built on bounded reachability."""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .decision import Answer, Budget, Problem, Query, Verdict, certify
from .errors import MisuseError, UnsupportedProblem
from .graphs import cyclic_sccs, reachable_states
from .model import Configuration, CostFunction, Domain, Lasso, Transition, Vass, dot
from .reach_n import ReachQuery, ReachStatus, reachable

log = logging.getLogger(__name__)


def _require_natural(vass: Vass):
    if vass.domain is not Domain.NATURAL:
        raise MisuseError("this procedure is for ℕ-VASS; use the ℤ procedures instead")


def configuration_bounds(vass: Vass, a: Sequence[int], lam: Fraction) -> Tuple[int, ...]:
    """Per-counter bound on configurations of a cheapest simple configuration cycle.

    In a simple configuration cycle with average ≤ λ (λ > 0) fewer than half
    of the positions cost more than 2λ, and the cheap ones are distinct
    configurations with a·z ≤ 2λ.  So the cycle is shorter than
    L = 2|Q|·Π(⌊2λ/a_i⌋+1) and no counter exceeds ⌊2λ/a_i⌋ + L·U_i, with U_i
    the largest increment of counter i.  For λ = 0 every position must
    cost 0, i.e. all counters stay 0.
    """
    if lam == 0:
        return (0,) * vass.dimension
    low = [int(2 * lam / ai) for ai in a]
    length = 2 * vass.num_states * prod(b + 1 for b in low)
    up = [max([0] + [t.update[i] for t in vass.transitions]) for i in range(vass.dimension)]
    return tuple(b + length * u for b, u in zip(low, up))


def _config_graph(vass: Vass, a, bounds, lam: Fraction, max_configs: int):
    num, den = lam.numerator, lam.denominator
    size = vass.num_states * prod(b + 1 for b in bounds)
    if size > max_configs:
        return None
    g = nx.DiGraph()
    scale = size + 1
    for q in range(vass.num_states):
        for z in itertools.product(*(range(b + 1) for b in bounds)):
            w = den * dot(a, z) - num
            for i in vass.out_edges[q]:
                t = vass.transitions[i]
                z2 = tuple(x + d for x, d in zip(z, t.update))
                if all(0 <= x <= b for x, b in zip(z2, bounds)):
                    u, v = (q, z), (t.target, z2)
                    if not g.has_edge(u, v):
                        # a cycle with Σw ≤ 0 becomes strictly negative, Σw ≥ 1 stays positive
                        g.add_edge(u, v, w=w * scale - 1, trans=i)
    return g


def uniform_average_N(vass: Vass, a: Sequence[int], threshold,
                      budget: Optional[Budget] = None, max_configs: int = 200_000) -> Answer:
    """Regular (equivalently general) average ≤ λ for uniform cost a·z over ℕ."""
    _require_natural(vass)
    budget = budget or Budget()
    bd = dict(budget.as_dict(), max_configs=max_configs)
    if len(a) != vass.dimension:
        raise MisuseError("cost vector has the wrong dimension")
    if any(c <= 0 for c in a):
        raise UnsupportedProblem("uniform costs over ℕ need strictly positive coefficients")
    lam = Fraction(threshold)
    if lam < 0:
        return Answer(Verdict.NO, step="bounded-cycles", budget=bd,
                      reason="costs over ℕ are nonnegative", problems=("regular-average", "average"))
    bounds = configuration_bounds(vass, a, lam)
    g = _config_graph(vass, a, bounds, lam, max_configs)
    if g is None:
        return Answer(Verdict.UNKNOWN, step="bounded-cycles", budget=bd,
                      reason=f"configuration space with bounds {bounds} exceeds max_configs")
    cost = CostFunction.uniform(vass, a)
    unknown = False
    while True:
        cycle_nodes = _negative_cycle(g)
        if cycle_nodes is None:
            break
        start = cycle_nodes[0]
        cyc = tuple(g[u][v]["trans"] for u, v in zip(cycle_nodes, cycle_nodes[1:]))
        # every configuration of the cycle's SCC shares its reachability status
        comp = _scc_of(g, start)
        status = None
        for q0 in vass.initial:
            res = reachable(ReachQuery(vass, Configuration(q0, vass.zero()),
                                       Configuration(start[0], start[1]),
                                       budget.reach_budget))
            if res.status is ReachStatus.REACHABLE:
                lasso = Lasso(res.path, cyc)
                value = certify(vass, cost, lasso, Problem.REGULAR_AVERAGE, lam)
                assert value is not None
                return Answer(Verdict.YES, lasso, value, "bounded-cycles",
                              "reachable configuration cycle", bd,
                              ("regular-average", "average"))
            if res.status is ReachStatus.UNKNOWN:
                status = "unknown"
        unknown = unknown or status == "unknown"
        g.remove_nodes_from(comp)
    if unknown:
        return Answer(Verdict.UNKNOWN, step="bounded-cycles", budget=bd,
                      reason="a cheap configuration cycle exists but its reachability is undecided")
    return Answer(Verdict.NO, step="bounded-cycles", budget=bd,
                  reason=f"no reachable configuration cycle with average ≤ {lam} "
                         f"within counter bounds {bounds}", problems=("regular-average", "average"))


def _scc_of(g: nx.DiGraph, node):
    for comp in nx.strongly_connected_components(g):
        if node in comp:
            return comp
    return {node}


def _negative_cycle(g: nx.DiGraph) -> Optional[List]:
    """Nodes of a negative cycle (closed: first == last), deterministically."""
    if g.number_of_edges() == 0:
        return None
    src = ("__source__",)
    h = g.copy()
    for v in sorted(g.nodes):
        h.add_edge(src, v, w=0)
    try:
        cyc = nx.find_negative_cycle(h, src, weight="w")
    except nx.NetworkXError:
        return None
    if cyc[0] != cyc[-1]:
        cyc = cyc + [cyc[0]]
    # rotate to the smallest configuration for stable output
    body = cyc[:-1]
    k = body.index(min(body))
    body = body[k:] + body[:k]
    return body + [body[0]]


def reachability_to_average_N(vass: Vass, source, target) -> Tuple[Vass, CostFunction, Fraction]:
    """Reduce reachability of (q', 0) from (q, 0) to an average-value question at λ = 0.

    New initial state q_S moves to q while setting the extra counter to 1;
    q' may move to q_F, which can drain the extra counter and then idle.
    Cost is the sum of all counters.
    """
    _require_natural(vass)
    q, qt = (_state(vass, source), _state(vass, target))
    k = vass.dimension
    names = set(vass.states)
    qs, qf = _fresh("qS", names), _fresh("qF", names | {"qS"})
    states = vass.states + (qs, qf)
    iqs, iqf = len(vass.states), len(vass.states) + 1
    tnames = {t.name for t in vass.transitions}
    ext = tuple(Transition(t.source, t.target, t.update + (0,), t.name)
                for t in vass.transitions)
    unit = (0,) * k + (1,)
    zero = (0,) * (k + 1)
    extra = (Transition(iqs, q, unit, _fresh("start", tnames)),
             Transition(qt, iqf, zero, _fresh("finish", tnames)),
             Transition(iqf, iqf, zero, _fresh("idle", tnames)),
             Transition(iqf, iqf, tuple(-x for x in unit), _fresh("drain", tnames)))
    out = Vass(k + 1, states, (iqs,), ext + extra, Domain.NATURAL)
    return out, CostFunction.uniform(out, (1,) * (k + 1)), Fraction(0)


def _state(vass: Vass, conf) -> int:
    if isinstance(conf, Configuration):
        if any(conf.counters):
            raise MisuseError("the reduction expects configurations with zero counters")
        return conf.state
    if isinstance(conf, str):
        return vass.state_index(conf)
    return int(conf)


def _fresh(name: str, taken) -> str:
    out, n = name, 0
    while out in taken:
        n += 1
        out = f"{name}{n}"
    return out


def finite_value_gadget(vass: Vass, cost: CostFunction, invariant: Sequence[int]) -> Vass:
    """2k-counter VASS reaching (check, 0) iff some lasso has a finite value.

    Counters j ∈ ``invariant`` must return to their value after the cycle;
    the others may grow but must not be read by the cost on the cycle.
    Phase 1 updates both copies, phase 2 (the cycle, from a recorded start
    state s) only the first; the check state drains both copies together
    and, for non-invariant counters, the first copy alone.
    """
    k = vass.dimension
    n = vass.num_states
    inv = set(invariant)
    allowed = [all(cost.labels[q][j] == 0 for j in range(k) if j not in inv) for q in range(n)]
    states = [f"p1:{s}" for s in vass.states]
    index2 = {}
    for s in range(n):
        if not allowed[s]:
            continue
        for q in range(n):
            if allowed[q]:
                for moved in (0, 1):
                    if moved == 0 and q != s:
                        continue
                    index2[(s, q, moved)] = len(states)
                    states.append(f"p2:{vass.states[s]}:{vass.states[q]}:{moved}")
    check = len(states)
    states.append("check")
    trans = []
    zero = (0,) * (2 * k)
    for i, t in enumerate(vass.transitions):
        trans.append(Transition(t.source, t.target, t.update + t.update, f"a{i}"))
    for s in range(n):
        if (s, s, 0) in index2:
            trans.append(Transition(s, index2[(s, s, 0)], zero, f"switch{s}"))
            trans.append(Transition(index2[(s, s, 1)], check, zero, f"close{s}"))
    for (s, q, moved), idx in index2.items():
        for i in vass.out_edges[q]:
            t = vass.transitions[i]
            dst = index2.get((s, t.target, 1))
            if dst is not None:
                trans.append(Transition(idx, dst, t.update + (0,) * k, f"b{i}:{idx}"))
    for j in range(k):
        both = tuple(-1 if c in (j, j + k) else 0 for c in range(2 * k))
        trans.append(Transition(check, check, both, f"drain{j}"))
        if j not in inv:
            first = tuple(-1 if c == j else 0 for c in range(2 * k))
            trans.append(Transition(check, check, first, f"excess{j}"))
    return Vass(2 * k, tuple(states), vass.initial, tuple(trans), Domain.NATURAL)


def _decode(vass: Vass, gadget: Vass, path) -> Lasso:
    prefix, cycle = [], []
    phase = 1
    for i in path:
        name = gadget.transitions[i].name
        if name.startswith("switch"):
            phase = 2
        elif name.startswith("close"):
            break
        elif name.startswith("a"):
            prefix.append(int(name[1:]))
        elif name.startswith("b"):
            cycle.append(int(name[1:name.index(":")]))
    return Lasso(tuple(prefix), tuple(cycle))


def regular_finite_value_N(q: Query) -> Answer:
    """Is there an ℕ-executable lasso with a finite value?"""
    vass, cost, budget = q.vass, q.cost, q.budget
    _require_natural(vass)
    bd = budget.as_dict()
    reach = reachable_states(vass)
    if not cyclic_sccs(vass, reach):
        return Answer(Verdict.NO, step="finite-N", reason="no reachable cycle", budget=bd)
    k = vass.dimension
    undecided = False
    subsets = [c for size in range(k, -1, -1) for c in itertools.combinations(range(k), size)]
    for inv in subsets:
        gadget = finite_value_gadget(vass, cost, inv)
        for q0 in vass.initial:
            res = reachable(ReachQuery(gadget, Configuration(q0, gadget.zero()),
                                       Configuration(gadget.num_states - 1, gadget.zero()),
                                       budget.reach_budget))
            if res.status is ReachStatus.REACHABLE:
                lasso = _decode(vass, gadget, res.path)
                value = certify(vass, cost, lasso, Problem.REGULAR_FINITE)
                assert value is not None
                return Answer(Verdict.YES, lasso, value, "finite-N",
                              f"invariant counters {list(inv)}", bd)
            if res.status is ReachStatus.UNKNOWN:
                undecided = True
    if undecided:
        return Answer(Verdict.UNKNOWN, step="finite-N", budget=bd,
                      reason="reachability in the two-copy system is undecided within budget")
    return Answer(Verdict.NO, step="finite-N", budget=bd,
                  reason="the two-copy system cannot reach its zero check configuration")
