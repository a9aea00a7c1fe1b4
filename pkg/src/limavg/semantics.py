"""Exact lasso evaluation and a brute-force oracle for the regular average problem."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ValidityError
from .model import (NEG_INFINITY, POS_INFINITY, Configuration, CostFunction, Domain,
                    ExtendedValue, Lasso, Path, Vass, check_lasso, dot, path_summary,
                    simulate, sum_from)


@dataclass(frozen=True)
class LassoVerdict:
    """``value`` is the per-iteration average Sum_{Gain(prefix)}(cycle)/|cycle|.

    When the cycle is balanced, every iteration sums to the same value, but
    inside an iteration the partial sums drift by m·Gain·Vals(cycle[:k]) at
    the m-th iteration.  The running averages then have one limit point per
    cycle phase k, namely (sum + Gain·Vals(cycle[:k]))/|cycle|, and
    ``liminf`` is the smallest of them.  It equals the minimum of ``value``
    over all rotations of the lasso, so "some lasso has value ≤ λ" and "some
    lasso has liminf ≤ λ" are the same question.
    """

    value: ExtendedValue
    per_iteration_sum: Optional[int]
    cycle_length: int
    liminf: Optional[ExtendedValue] = None

    def __post_init__(self):
        if self.liminf is None:
            object.__setattr__(self, "liminf", self.value)


def natural_validity(vass: Vass, lasso: Lasso) -> Optional[str]:
    """Reason why the lasso is not executable over ℕ, or None if it is.

    Prefix and one cycle iteration must stay nonnegative and the cycle must
    not decrease any counter; then every later iteration dominates the first.
    """
    base = check_lasso(vass, lasso)
    start = vass.transitions[(lasso.prefix or lasso.cycle)[0]].source
    pre = simulate(vass, Configuration(start, vass.zero()), lasso.prefix)
    if pre.first_negative is not None:
        return f"counter negative after prefix step {pre.first_negative}"
    run = simulate(vass, Configuration(base, pre.final.counters), lasso.cycle + lasso.cycle)
    if run.first_negative is not None:
        return f"counter negative at cycle step {run.first_negative}"
    after_one = run.configurations[len(lasso.cycle)].counters
    if any(a < b for a, b in zip(after_one, pre.final.counters)):
        return "cycle decreases a counter"
    return None


def lasso_value(vass: Vass, cost: CostFunction, lasso: Lasso) -> LassoVerdict:
    """LimAvg of the computation ``prefix · cycle^ω``, exactly."""
    check_lasso(vass, lasso)
    if vass.domain is Domain.NATURAL:
        why = natural_validity(vass, lasso)
        if why is not None:
            raise ValidityError(why)
    gain, vals = path_summary(vass, cost, lasso.cycle)
    d = dot(gain, vals)
    n = len(lasso.cycle)
    if d < 0:
        return LassoVerdict(NEG_INFINITY, None, n)
    if d > 0:
        return LassoVerdict(POS_INFINITY, None, n)
    g, _ = path_summary(vass, cost, lasso.prefix)
    s = sum_from(vass, cost, g, lasso.cycle)
    drift, low = [0] * vass.dimension, 0
    for i in lasso.cycle[:-1]:
        drift = [a + b for a, b in zip(drift, cost.labels[vass.transitions[i].source])]
        low = min(low, dot(gain, drift))
    return LassoVerdict(ExtendedValue.of(Fraction(s, n)), s, n,
                        ExtendedValue.of(Fraction(s + low, n)))


def position_costs(vass: Vass, cost: CostFunction, lasso: Lasso, horizon: int) -> List[int]:
    """f at the first ``horizon`` positions of the unrolled lasso."""
    check_lasso(vass, lasso)
    out = []
    z = list(vass.zero())
    seq = itertools.chain(lasso.prefix, itertools.cycle(lasso.cycle))
    for i in itertools.islice(seq, horizon):
        t = vass.transitions[i]
        out.append(dot(z, cost.labels[t.source]))
        for j, d in enumerate(t.update):
            z[j] += d
    return out


def numeric_prefix_averages(vass: Vass, cost: CostFunction, lasso: Lasso,
                            horizon: int) -> List[Fraction]:
    """Partial averages 1/(k+1)·Σ_{i≤k} f(π[i]) for k < horizon."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    out = []
    total = 0
    for k, f in enumerate(position_costs(vass, cost, lasso, horizon)):
        total += f
        out.append(Fraction(total, k + 1))
    return out


@dataclass(frozen=True)
class OracleReport:
    answer: str  # "YES" or "UNKNOWN"
    witness: Optional[Lasso]
    value: Optional[ExtendedValue]
    max_prefix: int
    max_cycle: int


def closed_walks_of_length(vass: Vass, length: int):
    """Closed walks with exactly ``length`` transitions, lexicographically."""
    ntr = len(vass.transitions)
    stack = [(i,) for i in reversed(range(ntr))]
    while stack:
        w = stack.pop()
        last = vass.transitions[w[-1]]
        if len(w) == length:
            if last.target == vass.transitions[w[0]].source:
                yield w
            continue
        for i in reversed(vass.out_edges[last.target]):
            stack.append(w + (i,))


def prefix_table(vass: Vass, max_prefix: int,
                 gain_box: Optional[int] = None) -> Dict[int, List[Tuple[Tuple[int, ...], Path]]]:
    """For each state: distinct reachable gains with one shortest prefix each.

    BFS over (state, gain) pairs in transition index order, so the stored
    prefix is the first found among the shortest ones.
    """
    start = vass.zero()
    seen = {}
    frontier = []
    for q in vass.initial:
        if (q, start) not in seen:
            seen[(q, start)] = ()
            frontier.append((q, start))
    for _ in range(max_prefix):
        nxt = []
        for q, g in frontier:
            p = seen[(q, g)]
            for i in vass.out_edges[q]:
                t = vass.transitions[i]
                g2 = tuple(a + b for a, b in zip(g, t.update))
                if gain_box is not None and any(abs(x) > gain_box for x in g2):
                    continue
                key = (t.target, g2)
                if key not in seen:
                    seen[key] = p + (i,)
                    nxt.append(key)
        frontier = nxt
    table: Dict[int, List] = {}
    for (q, g), p in seen.items():
        table.setdefault(q, []).append((g, p))
    return table


def cycle_representatives(vass: Vass, cost: CostFunction, max_cycle: int):
    """Per (length, base state): closed walks reduced to what decides their value.

    Walks from the same base with equal (current state, gain, vals) differ
    only in the cost accumulated so far, and every continuation adds the same
    amount to both.  Keeping the smallest Sum_0 (lexicographically first walk
    on ties) therefore loses no lasso value.  Yields
    ``(walk, gain, vals, sum0)`` ordered by length, base, then walk.
    """
    k = vass.dimension
    zero = (0,) * k
    for base in range(vass.num_states):
        layer = {(base, zero, zero): (0, ())}
        per_length = []
        for length in range(1, max_cycle + 1):
            nxt: Dict = {}
            for (q, g, vals), (s, walk) in layer.items():
                lab = cost.labels[q]
                s2 = s + dot(g, lab)
                v2 = tuple(a + b for a, b in zip(vals, lab))
                for i in vass.out_edges[q]:
                    t = vass.transitions[i]
                    key = (t.target, tuple(a + b for a, b in zip(g, t.update)), v2)
                    cand = (s2, walk + (i,))
                    old = nxt.get(key)
                    if old is None or cand < old:
                        nxt[key] = cand
            layer = nxt
            closed = sorted((w, g, vals, s) for (q, g, vals), (s, w) in layer.items() if q == base)
            per_length.append(closed)
        yield base, per_length


def oracle_regular_average(vass: Vass, cost: CostFunction, threshold, max_prefix: int,
                           max_cycle: int, gain_box: Optional[int] = None,
                           table=None, cycles=None, walk_cap: int = 20_000) -> OracleReport:
    """Exhaustive bounded search for a lasso of value ≤ threshold.

    Covers every cycle of length ≤ max_cycle reachable by a prefix of length
    ≤ max_prefix.  Never answers NO.  ``table`` (from :func:`prefix_table`)
    and ``cycles`` (list of :func:`cycle_representatives`) can be shared
    across thresholds.
    """
    lam = Fraction(threshold)
    if table is None:
        table = prefix_table(vass, max_prefix, gain_box)
    if cycles is None:
        cycles = list(cycle_representatives(vass, cost, max_cycle))
    arrays = {q: (np.array([g for g, _ in rows], dtype=np.int64), rows)
              for q, rows in table.items()}
    by_length = [[] for _ in range(max_cycle)]
    for base, per_length in cycles:
        if base in arrays:
            for length, closed in enumerate(per_length):
                by_length[length].extend(closed)
    for length, closed in enumerate(by_length, 1):
        found = None
        for walk, gain, vals, s0 in sorted(closed):
            lasso = _try_cycle(vass, cost, arrays, walk, gain, vals, s0, lam)
            if lasso is not None:
                found = lasso
                break
        if found is None:
            continue
        # the representatives prove a witness of this length exists; report
        # the lexicographically first one when that is affordable
        first = _first_walk(vass, cost, arrays, length, lam, walk_cap)
        lasso = first or found
        value = lasso_value(vass, cost, lasso).value
        assert value <= lam
        return OracleReport("YES", lasso, value, max_prefix, max_cycle)
    return OracleReport("UNKNOWN", None, None, max_prefix, max_cycle)


def _try_cycle(vass, cost, arrays, walk, gain, vals, s0, lam) -> Optional[Lasso]:
    d = dot(gain, vals)
    if d > 0:
        return None
    gains, rows = arrays[vass.transitions[walk[0]].source]
    if d < 0:
        pick = 0
    else:
        # only g·Vals varies with the prefix; take the first minimiser
        scores = gains.dot(np.array(vals, dtype=np.int64))
        pick = int(np.argmin(scores))
        if Fraction(int(scores[pick]) + s0, len(walk)) > lam:
            return None
    lasso = Lasso(rows[pick][1], walk)
    return lasso if lasso_value(vass, cost, lasso).value <= lam else None


def _first_walk(vass, cost, arrays, length, lam, cap) -> Optional[Lasso]:
    count = 0
    for walk in closed_walks_of_length(vass, length):
        count += 1
        if count > cap:
            return None
        if vass.transitions[walk[0]].source not in arrays:
            continue
        gain, vals = path_summary(vass, cost, walk)
        s0 = sum_from(vass, cost, vass.zero(), walk)
        lasso = _try_cycle(vass, cost, arrays, walk, gain, vals, s0, lam)
        if lasso is not None:
            return lasso
    return None
