"""Shared random-instance builders for the test suites."""

from __future__ import annotations

import itertools
import random
from typing import List, Optional, Tuple

from limavg.generators import CnfFormula, random_vass
from limavg.graphs import shortest_path
from limavg.model import CostFunction, Lasso, Vass, dot, path_summary
from limavg.semantics import closed_walks_of_length
from limavg.templates import Template


def strongly_connected_vass(rng: random.Random, states: int, extra: int, dim: int,
                            upd=(-2, 2), coef=(0, 2)) -> Tuple[Vass, CostFunction]:
    """A ring through all states plus ``extra`` random edges."""
    names = [f"s{i}" for i in range(states)]
    edges = [(i, (i + 1) % states) for i in range(states)]
    edges += [(rng.randrange(states), rng.randrange(states)) for _ in range(extra)]
    trans = [(f"t{k}", names[a], names[b], tuple(rng.randint(*upd) for _ in range(dim)))
             for k, (a, b) in enumerate(edges)]
    vass = Vass.build(dim, names, [names[0]], trans)
    cost = CostFunction.for_vass(vass, [tuple(rng.randint(*coef) for _ in range(dim))
                                        for _ in names])
    return vass, cost


def closed_walks_at(vass: Vass, state: int, max_len: int) -> List[tuple]:
    out = []
    for length in range(1, max_len + 1):
        out += [w for w in closed_walks_of_length(vass, length)
                if vass.transitions[w[0]].source == state]
    return out


def random_walk(vass: Vass, rng: random.Random, start: int, length: int) -> Tuple[tuple, int]:
    path, cur = [], start
    for _ in range(length):
        i = rng.choice(vass.out_edges[cur])
        path.append(i)
        cur = vass.transitions[i].target
    return tuple(path), cur


def random_template(seed: int, max_p: int = 3, max_cycle: int = 4):
    """(vass, cost, template) with p ≤ max_p and cycles of length ≤ max_cycle."""
    rng = random.Random(seed)
    vass, cost = strongly_connected_vass(rng, rng.randint(1, 4), rng.randint(0, 4),
                                         rng.randint(1, 3))
    p = rng.randint(1, max_p)
    start = cur = rng.randrange(vass.num_states)
    conns, cycs = [], []
    for _ in range(p):
        a, cur = random_walk(vass, rng, cur, rng.randint(0, 2))
        conns.append(a)
        cycs.append(rng.choice(closed_walks_at(vass, cur, max_cycle)))
    a, cur = random_walk(vass, rng, cur, rng.randint(0, 2))
    a += shortest_path(vass, [cur], start)
    conns.append(a)
    return vass, cost, Template(tuple(conns), tuple(cycs))


def grouping_instance(seed: int):
    """(vass, cost, g, α0, β, α1, α2) with β and α1 closed at the same state."""
    rng = random.Random(seed)
    vass, cost = strongly_connected_vass(rng, rng.randint(1, 4), rng.randint(0, 4),
                                         rng.randint(1, 3))
    s = rng.randrange(vass.num_states)
    a0, u = random_walk(vass, rng, s, rng.randint(0, 3))
    walks = closed_walks_at(vass, u, 4)
    beta = rng.choice(walks)
    a1 = rng.choice(walks + [()])
    a2, v = random_walk(vass, rng, u, rng.randint(0, 3))
    g = tuple(rng.randint(-5, 5) for _ in range(vass.dimension))
    return vass, cost, g, a0, beta, a1, a2


def random_lasso(seed: int, sign: int) -> Optional[Tuple[Vass, CostFunction, Lasso]]:
    """A lasso whose cycle has Gain·Vals of the given sign, or None."""
    rng = random.Random(seed)
    vass, cost = random_vass(rng.randint(1, 4), rng.randint(3, 6), rng.randint(1, 2),
                             (-2, 2), (0, 2), seed)
    cands = []
    for length in range(1, 5):
        for w in closed_walks_of_length(vass, length):
            g, v = path_summary(vass, cost, w)
            d = dot(g, v)
            if (d > 0) - (d < 0) == sign and (sign != 0 or any(v)):
                cands.append(w)
    if not cands:
        return None
    cyc = rng.choice(cands)
    q0 = vass.transitions[cyc[0]].source
    prefix = shortest_path(vass, list(vass.initial), q0)
    # a random detour back to q0 makes the prefix more interesting
    extra = [w for w in closed_walks_at(vass, q0, 3)]
    if extra and rng.random() < 0.7:
        prefix += rng.choice(extra) * rng.randint(1, 3)
    return vass, cost, Lasso(prefix, cyc)


def canonical_cnf(n: int, clauses) -> tuple:
    """Smallest clause tuple over variable renamings and polarity flips."""
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        for flips in itertools.product((1, -1), repeat=n):
            def m(lit):
                return perm[abs(lit) - 1] * flips[abs(lit) - 1] * (1 if lit > 0 else -1)
            cs = tuple(sorted(tuple(sorted(m(lit) for lit in c)) for c in clauses))
            if best is None or cs < best:
                best = cs
    return best


def small_cnfs(max_vars: int = 2, max_clauses: int = 3) -> List[CnfFormula]:
    """All 3-CNF formulas up to the bounds, one per symmetry class."""
    forms = set()
    for n in range(1, max_vars + 1):
        lits = sorted(l for v in range(1, n + 1) for l in (v, -v))
        clauses = list(itertools.combinations_with_replacement(lits, 3))
        for count in range(1, max_clauses + 1):
            for cs in itertools.combinations_with_replacement(clauses, count):
                forms.add((n, canonical_cnf(n, cs)))
    return [CnfFormula(n, cs) for n, cs in sorted(forms)]


def random_cnfs(count: int, seed: int, max_vars: int = 4, max_clauses: int = 5):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_vars)
        cs = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3))
                   for _ in range(rng.randint(1, max_clauses)))
        out.append(CnfFormula(n, cs))
    return out


def acceptance_instance(seed: int):
    """The random ℤ-VASS family of the oracle agreement suite."""
    rng = random.Random(seed)
    nq = rng.randint(1, 4)
    nt = rng.randint(max(nq - 1, 1), 6)
    k = rng.randint(1, 3)
    return random_vass(nq, nt, k, (-2, 2), (0, 2), seed)
