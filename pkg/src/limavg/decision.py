"""Decision procedures for regular long-run average problems over ℤ.

Every YES carries a lasso that is re-evaluated with
:func:`limavg.semantics.lasso_value` before it is returned.  NO is only
returned together with the argument that justifies it (``Answer.reason``).
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import iqp
from .copositive import (COPOSITIVE, NEGATIVE, STRICT, ZERO, copositivity,
                         strict_copositivity)
from .errors import MisuseError, UnsupportedProblem
from .graphs import (cyclic_sccs, euler_path, reachable_states, rotate, shortest_path,
                     simple_cycles, support_connected)
from .model import (CostFunction, Domain, ExtendedValue, Lasso, Path, Transition, Vass,
                    dot, path_summary, transition_counts, transition_matrix)
from .semantics import lasso_value, oracle_regular_average
from .templates import (Template, balanced_linear_systems, check_template, closing_cycle,
                        extended_template, instantiate, quad, reversed_template,
                        template_coefficients)

log = logging.getLogger(__name__)


class Verdict(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


class Problem(enum.Enum):
    REGULAR_AVERAGE = "regular-average"
    REGULAR_FINITE = "regular-finite"
    REGULAR_NEG_INF = "regular-neg-inf"


@dataclass(frozen=True)
class Budget:
    """Search limits.  All of them are reported back in answers."""

    box_start: int = 2
    box_cap: int = 16
    node_budget: int = 20_000
    max_simple_cycles: int = 20_000
    max_signatures: int = 2_000
    copositive_size: int = 10
    max_subsets: int = 32
    max_template_cycles: int = 3
    max_templates: int = 200
    template_cycle_pool: int = 60
    max_rejections: int = 16
    enum_prefix: int = 6
    enum_cycle: int = 6
    reach_budget: int = 200_000

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class Query:
    vass: Vass
    cost: CostFunction
    problem: Problem
    threshold: Optional[Fraction] = None
    budget: Budget = field(default_factory=Budget)

    def __post_init__(self):
        if self.problem is Problem.REGULAR_AVERAGE:
            if self.threshold is None:
                raise MisuseError("the regular average problem needs a threshold")
            object.__setattr__(self, "threshold", Fraction(self.threshold))
        if len(self.cost.labels) != self.vass.num_states:
            raise MisuseError("cost function does not match the VASS")


@dataclass(frozen=True)
class Answer:
    verdict: Verdict
    witness: Optional[Lasso] = None
    value: Optional[ExtendedValue] = None
    step: str = ""
    reason: str = ""
    budget: Dict[str, int] = field(default_factory=dict)
    problems: Tuple[str, ...] = ()


def certify(vass: Vass, cost: CostFunction, lasso: Lasso, problem: Problem,
            threshold: Optional[Fraction] = None) -> Optional[ExtendedValue]:
    """Exact value of the lasso if it answers the problem, else None."""
    value = lasso_value(vass, cost, lasso).value
    if problem is Problem.REGULAR_NEG_INF:
        ok = value.kind < 0
    elif problem is Problem.REGULAR_FINITE:
        ok = value.kind <= 0
    else:
        ok = value <= threshold
    return value if ok else None


def _yes(q: Query, lasso: Lasso, step: str, reason: str) -> Optional[Answer]:
    value = certify(q.vass, q.cost, lasso, q.problem, q.threshold)
    if value is None:
        return None
    return Answer(Verdict.YES, lasso, value, step, reason, q.budget.as_dict())


def _require_integer(q: Query):
    if q.vass.domain is not Domain.INTEGER:
        raise UnsupportedProblem(f"{q.problem.value} over ℕ is not handled by the ℤ procedures")


# ---------------------------------------------------------------------------
# cycles with Gain·Vals < 0 (resp. ≤ 0)


@dataclass
class _SccData:
    states: Tuple[int, ...]
    cycles: List[Path]
    complete: bool
    summaries: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]


def _scc_data(vass: Vass, cost: CostFunction, budget: Budget) -> List[_SccData]:
    reach = reachable_states(vass)
    out = []
    for scc in cyclic_sccs(vass, reach):
        cycles = list(simple_cycles(vass, scc, limit=budget.max_simple_cycles + 1))
        complete = len(cycles) <= budget.max_simple_cycles
        cycles = cycles[:budget.max_simple_cycles]
        out.append(_SccData(scc, cycles, complete,
                            [path_summary(vass, cost, c) for c in cycles]))
    return out


def _prefix_to(vass: Vass, state: int) -> Path:
    path = shortest_path(vass, vass.initial, state)
    assert path is not None
    return path


def _lasso_for(vass: Vass, cycle: Path) -> Lasso:
    return Lasso(_prefix_to(vass, vass.transitions[cycle[0]].source), cycle)


def _cost_nonnegative(vass: Vass, cost: CostFunction, states: Iterable[int]) -> bool:
    """u_e·l(q) ≥ 0 for all transitions e and states q inside ``states``.

    Then every counter valuation reachable inside the region scores ≥ 0
    on every cycle combination (all Gram entries are sums of such terms).
    """
    states = set(states)
    labels = {cost.labels[q] for q in states}
    return all(dot(t.update, lab) >= 0 for t in vass.transitions
               if t.source in states and t.target in states for lab in labels)


def _gram(summaries) -> np.ndarray:
    G = np.array([g for g, _ in summaries], dtype=object)
    V = np.array([v for _, v in summaries], dtype=object)
    return G.dot(V.T) + V.dot(G.T)


def _reduce_gram(M: np.ndarray, strict: bool) -> List[int]:
    """Drop indices whose row is nonnegative (positive diagonal if strict)."""
    n = M.shape[0]
    neg = (M < 0)
    count = neg.sum(axis=1).astype(int)
    diag = np.array([M[i, i] for i in range(n)])
    alive = np.ones(n, dtype=bool)
    todo = [i for i in range(n) if count[i] == 0 and (diag[i] > 0 or not strict)]
    while todo:
        i = todo.pop()
        if not alive[i]:
            continue
        alive[i] = False
        for j in np.nonzero(neg[:, i] & alive)[0]:
            count[j] -= 1
            if count[j] == 0 and (diag[j] > 0 or not strict):
                todo.append(int(j))
    return [int(i) for i in np.nonzero(alive)[0]]


def _covering_walk(vass: Vass, states: Sequence[int]) -> Path:
    """Closed walk inside an SCC visiting all of its states."""
    region = set(states)
    walk: List[int] = []
    order = list(states) + [states[0]]
    for a, b in zip(order, order[1:]):
        walk.extend(shortest_path(vass, [a], b, region))
    if not walk:  # single state: use any self-loop
        walk = [next(i for i in vass.out_edges[states[0]]
                     if vass.transitions[i].target == states[0])]
    return tuple(walk)


def _cycle_from_counts(vass: Vass, counts: Sequence[int]) -> Optional[Path]:
    used = [i for i, c in enumerate(counts) if c]
    if not used:
        return None
    base = min(vass.transitions[i].source for i in used)
    return euler_path(vass, counts, base, base)


def _combine(vass: Vass, data: _SccData, weights: Sequence[int], strict_negative: bool,
             A) -> Optional[Path]:
    """Turn a nonnegative combination of simple cycles into one cycle."""
    m = len(vass.transitions)
    x = [0] * m
    for w, cyc in zip(weights, data.cycles):
        if w:
            for i in cyc:
                x[i] += w
    path = _cycle_from_counts(vass, x)
    if path is not None:
        return path
    y = transition_counts(vass, _covering_walk(vass, data.states))
    fx, fxy, fy = quad(A, x), _bilinear(A, x, y), quad(A, y)
    # value of t·x + y is t²·fx + 2t·fxy + fy
    for t in itertools.chain(range(1, 64), (2 ** k for k in range(6, 40))):
        v = t * t * fx + 2 * t * fxy + fy
        if v < 0 or (v == 0 and not strict_negative):
            return _cycle_from_counts(vass, [t * a + b for a, b in zip(x, y)])
    return None


def _bilinear(A, x, y) -> int:
    return sum(A[i][j] * x[i] * y[j] for i in range(len(x)) if x[i] for j in range(len(y)) if y[j])


def _iqp_cycle_search(vass: Vass, A, states: Sequence[int], strict_negative: bool,
                      budget: Budget) -> Tuple[Optional[Path], bool]:
    """Search cycles inside strongly connected subsets of ``states`` by IQP.

    Returns (cycle or None, exhaustive) where exhaustive means every subset
    was refuted up to the box cap.
    """
    region = list(states)
    exhaustive = True
    tried = 0
    for size in range(1, len(region) + 1):
        for S in itertools.combinations(region, size):
            Sset = set(S)
            idx = [i for i, t in enumerate(vass.transitions)
                   if t.source in Sset and t.target in Sset]
            if not idx:
                continue
            if len(cyclic_sccs(vass, Sset)) != 1 or set(cyclic_sccs(vass, Sset)[0]) != Sset:
                continue
            tried += 1
            if tried > budget.max_subsets:
                return None, False
            cyc, done = _iqp_cycle_in(vass, A, S, idx, strict_negative, budget)
            if cyc is not None:
                return cyc, False
            exhaustive = exhaustive and done
    return None, exhaustive


def _iqp_cycle_in(vass, A, S, idx, strict_negative, budget):
    nv = len(idx)
    sub = tuple(tuple(A[i][j] for j in idx) for i in idx)
    lb = iqp.LinearBuilder(nv)
    for s in S:
        row = [0] * nv
        out = [0] * nv
        for k, i in enumerate(idx):
            t = vass.transitions[i]
            row[k] += (t.source == s) - (t.target == s)
            out[k] += t.source == s
        lb.eq(row, 0)
        lb.ge(out, 1)
    inst = iqp.IqpInstance(nv, (iqp.QuadConstraint(sub, (0,) * nv,
                                                   1 if strict_negative else 0),),
                           tuple(lb.rows), tuple(lb.rhs))
    box = budget.box_start
    while True:
        search = iqp.iter_solutions(inst, box, budget.node_budget)
        rejected = 0
        for x in search:
            counts = [0] * len(vass.transitions)
            for k, i in enumerate(idx):
                counts[i] = x[k]
            cyc = _cycle_from_counts(vass, counts)
            if cyc is not None:
                return cyc, False
            rejected += 1
            if rejected >= budget.max_rejections:
                return None, False
        if not search.complete:
            return None, False
        if box >= budget.box_cap:
            return None, True
        box = min(2 * box, budget.box_cap)


def _cycle_problem(q: Query, strict_negative: bool, step: str) -> Answer:
    """Shared engine of the −∞ and finite-value procedures."""
    vass, cost, budget = q.vass, q.cost, q.budget
    data = _scc_data(vass, cost, budget)
    if not data:
        return Answer(Verdict.NO, step=step, reason="no reachable cycle",
                      budget=budget.as_dict())
    A = transition_matrix(vass, cost)
    reasons = []
    undecided = []
    for d in data:
        for cyc, (g, v) in zip(d.cycles, d.summaries):
            val = dot(g, v)
            if val < 0 or (val == 0 and not strict_negative):
                ans = _yes(q, _lasso_for(vass, cyc), f"{step}:cycle-scan", "simple cycle")
                if ans is not None:
                    return ans
    for d in data:
        name = "{" + ",".join(vass.states[s] for s in d.states) + "}"
        if d.complete and _cost_nonnegative(vass, cost, d.states):
            # all Gram entries ≥ 0 and (scan above) every diagonal entry > 0 when strict
            reasons.append(f"SCC {name}: all update/label products are nonnegative")
            continue
        status = None
        if d.complete:
            uniq: Dict[tuple, int] = {}
            for k, s in enumerate(d.summaries):
                uniq.setdefault(s, k)
            keys = list(uniq.values())
            if len(keys) <= budget.max_signatures:
                M = _gram([d.summaries[k] for k in keys])
                alive = _reduce_gram(M, strict=not strict_negative)
                if len(alive) <= budget.copositive_size:
                    sub = [[int(M[i, j]) for j in alive] for i in alive]
                    res = (copositivity(sub, budget.copositive_size) if strict_negative
                           else strict_copositivity(sub, budget.copositive_size))
                    status = res.status
                    if status in (NEGATIVE, ZERO):
                        w = [0] * len(d.cycles)
                        for pos, c in zip(alive, res.witness):
                            w[keys[pos]] = c
                        cyc = _combine(vass, d, w, strict_negative, A)
                        if cyc is not None:
                            ans = _yes(q, _lasso_for(vass, cyc), f"{step}:copositivity",
                                       "combination of simple cycles")
                            if ans is not None:
                                return ans
                        status = None
                    elif status in (COPOSITIVE, STRICT):
                        reasons.append(f"SCC {name}: cycle Gram matrix is "
                                       f"{'copositive' if strict_negative else 'strictly copositive'}")
                        continue
        undecided.append(d)
    exhaustive = True
    for d in undecided:
        cyc, done = _iqp_cycle_search(vass, A, d.states, strict_negative, budget)
        if cyc is not None:
            ans = _yes(q, _lasso_for(vass, cyc), f"{step}:iqp", "IQP over transition multiplicities")
            if ans is not None:
                return ans
        exhaustive = exhaustive and done
    if not undecided:
        return Answer(Verdict.NO, step=step, reason="; ".join(reasons), budget=budget.as_dict())
    return Answer(Verdict.UNKNOWN, step=step,
                  reason="IQP search refuted all subsets within the box cap only"
                  if exhaustive else "budget exhausted", budget=budget.as_dict())


def regular_neg_inf_Z(q: Query) -> Answer:
    """Is there a reachable cycle with Gain·Vals < 0?"""
    _require_integer(q)
    q = _as(q, Problem.REGULAR_NEG_INF)
    return _cycle_problem(q, True, "step1")


def regular_finite_value_Z(q: Query) -> Answer:
    """Is there a regular computation of value < +∞?"""
    _require_integer(q)
    q = _as(q, Problem.REGULAR_FINITE)
    return _cycle_problem(q, False, "finite")


def _as(q: Query, problem: Problem) -> Query:
    if q.problem is problem:
        return q
    return Query(q.vass, q.cost, problem, None, q.budget)


# ---------------------------------------------------------------------------
# templates for Steps 2 and 3


def enumerate_templates(vass: Vass, data: Sequence[_SccData], budget: Budget) -> List[Template]:
    """Templates with α0 = ε built from distinct simple cycles of one SCC.

    Connectors are shortest paths between consecutive base states inside
    the SCC.  Ordered by (cycle count, total connector length, discovery).
    """
    found = []
    for d in data:
        region = set(d.states)
        pool = d.cycles[:budget.template_cycle_pool]
        bases = [sorted({vass.transitions[i].source for i in c}) for c in pool]
        for c in pool:
            found.append((1, 0, len(found), Template(((), ()), (c,))))
        for p in range(2, budget.max_template_cycles + 1):
            count = 0
            for combo in itertools.permutations(range(len(pool)), p):
                if combo[0] != min(combo):
                    continue  # rotations of the sequence are covered by other bases
                for bs in itertools.product(*(bases[i] for i in combo)):
                    cycs = tuple(rotate(vass, pool[i], b) for i, b in zip(combo, bs))
                    conns = [()]
                    for a, b in zip(bs, bs[1:] + (bs[0],)):
                        conns.append(shortest_path(vass, [a], b, region))
                    tpl = Template(tuple(conns), cycs)
                    found.append((p, tpl.size() - sum(map(len, cycs)), len(found), tpl))
                    count += 1
                if count >= budget.max_templates:
                    break
    found.sort(key=lambda r: r[:3])
    return [r[3] for r in found[:budget.max_templates]]


def _template_start(vass: Vass, tpl: Template) -> int:
    return check_template(vass, tpl)


def _summ(vass, cost, paths):
    return [path_summary(vass, cost, p) for p in paths]


def _negativity(q: Query, tpl: Template) -> Optional[Answer]:
    """Search n1, n2 with n1^T B n1 < 0, n2 ∈ S_P and n1 ∈ S_P⁰; emit a witness."""
    vass, cost, budget = q.vass, q.cost, q.budget
    p = tpl.p
    coef = template_coefficients(vass, cost, tpl)
    B = coef.B
    zero = ((0,) * p,) * p
    Aq = tuple(tuple(B[i][j] if i < p and j < p else 0 for j in range(2 * p))
               for i in range(2 * p))
    for system in balanced_linear_systems(vass, cost, tpl):
        lb = iqp.LinearBuilder(2 * p)
        for a, b in system.equations:
            if any(a):
                lb.eq(tuple(a) + (0,) * p, 0)
                lb.eq((0,) * p + tuple(a), b)
            elif b != 0:
                break
        else:
            inst = iqp.IqpInstance(2 * p, (iqp.QuadConstraint(Aq, (0,) * (2 * p), 1),),
                                   tuple(lb.rows), tuple(lb.rhs))
            verdict = iqp.solve_escalating(inst, budget.box_start, budget.box_cap,
                                           budget.node_budget)
            if isinstance(verdict, iqp.Sat):
                n1, n2 = verdict.x[:p], verdict.x[p:]
                ans = _negative_witness(q, tpl, coef, n1, n2)
                if ans is not None:
                    return ans
    return None


def _negative_witness(q: Query, tpl: Template, coef, n1, n2) -> Optional[Answer]:
    """Smallest t ≥ 1 with Sum_g(Tpl(t·n1 + n2)) ≤ λ·|Tpl(t·n1 + n2)|."""
    vass, cost = q.vass, q.cost
    lam = q.threshold
    start = _template_start(vass, tpl)
    prefix = _prefix_to(vass, start)
    g, _ = path_summary(vass, cost, prefix)
    cyc = _summ(vass, cost, tpl.cycles)
    g0, v0 = path_summary(vass, cost, closing_cycle(tpl))
    L0 = len(closing_cycle(tpl))
    L = [len(b) for b in tpl.cycles]
    B, c = coef.B, coef.c

    def bil(x, y):
        return sum(B[i][j] * x[i] * y[j] for i in range(len(x)) for j in range(len(y)))

    def lin(m):  # part of 2·Sum_g − 2λ·Len that is linear in m
        return (dot(c, m) + 2 * sum(mi * dot(g, vi) for mi, (_, vi) in zip(m, cyc))
                - 2 * lam * sum(mi * li for mi, li in zip(m, L)))

    a2 = Fraction(bil(n1, n1))
    a1 = 2 * bil(n1, n2) + lin(n1)
    a0 = bil(n2, n2) + lin(n2) + coef.e + 2 * dot(g, v0) - 2 * lam * L0
    if a2 >= 0:
        return None

    def qv(t):
        return a2 * t * t + a1 * t + a0

    if qv(1) <= 0:
        t = 1
    else:
        lo, hi = 1, 2
        while qv(hi) > 0:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if qv(mid) <= 0:
                hi = mid
            else:
                lo = mid
        t = hi
    m = tuple(t * a + b for a, b in zip(n1, n2))
    lasso = Lasso(prefix, instantiate(tpl, m))
    if not lasso.cycle:
        return None
    return _yes(q, lasso, "step2", f"negative template with n1={tuple(n1)}, n2={tuple(n2)}, t={t}")


def _step3(q: Query, tpl: Template, subsets_round: int) -> Optional[Answer]:
    """Linear case: prefix flow x and multiplicities n in one IQP.

    Uses the exact value 2·Sum_0(Tpl(n)) = n^T B n + c·n + e restricted to
    balanced n (via S_P) instead of the linear substitute.
    """
    vass, cost, budget = q.vass, q.cost, q.budget
    lam = q.threshold
    num, den = lam.numerator, lam.denominator
    start = _template_start(vass, tpl)
    coef = template_coefficients(vass, cost, tpl)
    p = tpl.p
    cyc = _summ(vass, cost, tpl.cycles)
    _, v0 = path_summary(vass, cost, closing_cycle(tpl))
    L0 = len(closing_cycle(tpl))
    reach = reachable_states(vass)
    answered = False
    for q0 in vass.initial:
        options = []
        sp = shortest_path(vass, [q0], start)
        if sp is None:
            continue
        small = {q0, start} | {vass.transitions[i].target for i in sp}
        options.append(small)
        if reach != small:
            options.append(reach)
        if subsets_round >= len(options):
            continue
        region = options[subsets_round]
        idx = [i for i, t in enumerate(vass.transitions)
               if t.source in region and t.target in region]
        nv = p + len(idx)
        Q = [[0] * nv for _ in range(nv)]
        a = [0] * nv
        for i in range(p):
            for j in range(p):
                Q[i][j] = den * coef.B[i][j]
            a[i] = den * coef.c[i] - 2 * num * len(tpl.cycles[i])
        for k, e in enumerate(idx):
            u = vass.transitions[e].update
            for i in range(p):
                Q[p + k][i] = Q[i][p + k] = den * dot(u, cyc[i][1])
            a[p + k] = 2 * den * dot(u, v0)
        d = den * coef.e - 2 * num * L0
        quadc = iqp.QuadConstraint(tuple(map(tuple, Q)), tuple(a), d)
        flow_rows = []
        for s in sorted(region):
            row = [0] * nv
            for k, e in enumerate(idx):
                t = vass.transitions[e]
                row[p + k] += (t.source == s) - (t.target == s)
            flow_rows.append((row, int(s == q0) - int(s == start)))
        for system in balanced_linear_systems(vass, cost, tpl):
            lb = iqp.LinearBuilder(nv)
            ok = True
            for coeffs, rhs in system.equations:
                if any(coeffs):
                    lb.eq(tuple(coeffs) + (0,) * len(idx), rhs)
                elif rhs != 0:
                    ok = False
            if not ok:
                continue
            for row, rhs in flow_rows:
                lb.eq(row, rhs)
            if not closing_cycle(tpl):
                lb.ge((1,) * p + (0,) * len(idx), 1)
            inst = iqp.IqpInstance(nv, (quadc,), tuple(lb.rows), tuple(lb.rhs))
            ans = _step3_solve(q, tpl, inst, idx, q0, start)
            if ans is not None:
                return ans
    return None


def _step3_solve(q: Query, tpl, inst, idx, q0, start) -> Optional[Answer]:
    vass, budget = q.vass, q.budget
    p = tpl.p
    box = budget.box_start
    while True:
        search = iqp.iter_solutions(inst, box, budget.node_budget)
        rejected = 0
        for x in search:
            counts = [0] * len(vass.transitions)
            for k, e in enumerate(idx):
                counts[e] = x[p + k]
            prefix = euler_path(vass, counts, q0, start)
            if prefix is not None:
                cycle = instantiate(tpl, x[:p])
                if cycle:
                    ans = _yes(q, Lasso(prefix, cycle), "step3",
                               f"template multiplicities {tuple(x[:p])}")
                    if ans is not None:
                        return ans
            rejected += 1
            if rejected >= budget.max_rejections:
                return None
        if not search.complete or box >= budget.box_cap:
            return None
        box = min(2 * box, budget.box_cap)


def regular_average_Z(q: Query) -> Answer:
    """Is there a regular computation with LimAvg ≤ λ?"""
    _require_integer(q)
    if q.problem is not Problem.REGULAR_AVERAGE:
        raise MisuseError("regular_average_Z needs a REGULAR_AVERAGE query")
    vass, cost, budget, lam = q.vass, q.cost, q.budget, q.threshold
    bd = budget.as_dict()
    reach = reachable_states(vass)
    nonneg = _cost_nonnegative(vass, cost, reach)
    if nonneg and lam < 0:
        return Answer(Verdict.NO, step="step0",
                      reason="every reachable update/label product is ≥ 0, so every "
                             "computation has only nonnegative costs", budget=bd)
    step1 = regular_neg_inf_Z(q)
    if step1.verdict is Verdict.YES:
        ans = _yes(q, step1.witness, step1.step, "value −∞")
        assert ans is not None
        return ans
    fin = regular_finite_value_Z(q)
    if fin.verdict is Verdict.NO:
        return Answer(Verdict.NO, step="finite",
                      reason="no cycle with Gain·Vals ≤ 0 is reachable, every regular "
                             "computation has value +∞: " + fin.reason, budget=bd)
    if fin.verdict is Verdict.YES:
        ans = _yes(q, fin.witness, fin.step, "finite-value witness")
        if ans is not None:
            return ans
    data = _scc_data(vass, cost, budget)
    templates = enumerate_templates(vass, data, budget)
    if not nonneg:
        for tpl in templates:
            ans = _negativity(q, tpl)
            if ans is not None:
                return ans
        for tpl in templates:
            for other in (extended_template(tpl), reversed_template(tpl)):
                ans = _negativity(q, other)
                if ans is not None:
                    return ans
    for rnd in range(2):
        for tpl in templates:
            ans = _step3(q, tpl, rnd)
            if ans is not None:
                return ans
    rep = oracle_regular_average(vass, cost, lam, budget.enum_prefix, budget.enum_cycle)
    if rep.answer == "YES":
        ans = _yes(q, rep.witness, "enumeration", "bounded lasso enumeration")
        if ans is not None:
            return ans
    return Answer(Verdict.UNKNOWN, step="enumeration",
                  reason="no witness within the search limits", budget=bd)


def uniform_average_Z(vass: Vass, a: Sequence[int], threshold,
                      budget: Optional[Budget] = None) -> Answer:
    """Uniform cost a·z: collapse to one counter carrying a·z and decide that.

    For uniform costs the regular and the general average problems agree,
    so the answer covers both.
    """
    if vass.domain is not Domain.INTEGER:
        raise UnsupportedProblem("uniform_average_Z needs a ℤ-VASS")
    if len(a) != vass.dimension or any(c < 0 for c in a):
        raise MisuseError("a must be a natural vector of the VASS dimension")
    one = Vass(1, vass.states, vass.initial,
               tuple(Transition(t.source, t.target, (dot(a, t.update),), t.name)
                     for t in vass.transitions), Domain.INTEGER)
    cost1 = CostFunction.uniform(one, (1,))
    q = Query(one, cost1, Problem.REGULAR_AVERAGE, Fraction(threshold),
              budget or Budget())
    ans = regular_average_Z(q)
    if ans.verdict is Verdict.YES:
        # same transitions, same value on the original system
        value = certify(vass, CostFunction.uniform(vass, a), ans.witness,
                        Problem.REGULAR_AVERAGE, Fraction(threshold))
        assert value is not None and value == ans.value
    return Answer(ans.verdict, ans.witness, ans.value, ans.step, ans.reason, ans.budget,
                  ("regular-average", "average"))
