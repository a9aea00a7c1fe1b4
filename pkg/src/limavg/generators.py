"""Instance generators: the running example, the 3-SAT gadget, random models."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .errors import MisuseError
from .model import CostFunction, Domain, Vass


def running_example() -> Tuple[Vass, CostFunction]:
    """The three-state, two-counter model A_e with its labeling."""
    vass = Vass.build(
        2, ["A", "B", "C"], ["B"],
        [("e1", "B", "A", (1, 0)),
         ("e2", "A", "B", (0, -1)),
         ("e3", "B", "C", (0, 3)),
         ("e4", "C", "B", (-2, 0))])
    cost = CostFunction.for_vass(vass, [(4, 0), (1, 1), (0, 1)])
    return vass, cost


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        for c in self.clauses:
            if len(c) != 3:
                raise MisuseError("every clause needs exactly three literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise MisuseError(f"literal {lit} out of range")

    def satisfiable(self) -> bool:
        """Truth-table check; fine for the handful of variables used in tests."""
        for bits in range(1 << self.num_vars):
            if all(any((lit > 0) == bool(bits >> (abs(lit) - 1) & 1) for lit in c)
                   for c in self.clauses):
                return True
        return False


def parse_dimacs(text: str) -> CnfFormula:
    """DIMACS CNF; clauses shorter than three literals are padded by repetition."""
    nvars = None
    lits: List[int] = []
    clauses = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise MisuseError(f"bad DIMACS header: {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                if not lits:
                    raise MisuseError("empty clause")
                if len(lits) > 3:
                    raise MisuseError("clause with more than three literals")
                clauses.append(tuple((lits * 3)[:3]))
                lits = []
            else:
                lits.append(v)
    if lits:
        raise MisuseError("last clause is not terminated by 0")
    if nvars is None:
        raise MisuseError("missing 'p cnf' header")
    return CnfFormula(nvars, tuple(clauses))


def threesat_to_vass(phi: CnfFormula) -> Tuple[Vass, CostFunction, int]:
    """The hardness gadget: φ is satisfiable iff some lasso has value 0.

    Part I walks q0 … qn choosing x_i (counter i) or ¬x_i (counter i+n).
    Layer j has one state per literal of clause j whose cost reads the
    counter of the negated literal.  A sink closes the loop back to q0.
    """
    if not phi.clauses:
        raise MisuseError("formula needs at least one clause")
    n = phi.num_vars
    k = 2 * n
    states = [f"q{i}" for i in range(n + 1)]
    labels = [(0,) * k] * (n + 1)
    trans = []

    def unit(c):
        return tuple(int(j == c) for j in range(k))

    for i in range(1, n + 1):
        trans.append((f"x{i}", f"q{i - 1}", f"q{i}", unit(i - 1)))
        trans.append((f"nx{i}", f"q{i - 1}", f"q{i}", unit(i - 1 + n)))
    prev = [f"q{n}"]
    for j, clause in enumerate(phi.clauses, 1):
        layer = []
        for pos, lit in enumerate(clause, 1):
            name = f"c{j}_{pos}"
            layer.append(name)
            states.append(name)
            neg = abs(lit) - 1 + (n if lit > 0 else 0)
            labels.append(unit(neg))
        for a in prev:
            for b in layer:
                trans.append((f"{a}>{b}", a, b, (0,) * k))
        prev = layer
    states.append("fin")
    labels.append((0,) * k)
    for a in prev:
        trans.append((f"{a}>fin", a, "fin", (0,) * k))
    trans.append(("back", "fin", "q0", (0,) * k))
    vass = Vass.build(k, states, ["q0"], trans)
    return vass, CostFunction.for_vass(vass, labels), 0


def random_vass(states: int, transitions: int, dimension: int,
                update_range: Tuple[int, int] = (-2, 2),
                coef_range: Tuple[int, int] = (0, 2), seed: int = 0,
                domain: Domain = Domain.INTEGER) -> Tuple[Vass, CostFunction]:
    """Seeded random model; every state is reachable from the initial state 0."""
    if states < 1 or dimension < 1 or transitions < states - 1:
        raise MisuseError("need states >= 1, dimension >= 1 and transitions >= states - 1")
    if coef_range[0] < 0 or coef_range[0] > coef_range[1] or update_range[0] > update_range[1]:
        raise MisuseError("bad value ranges")
    rng = random.Random(seed)
    edges = [(rng.randrange(s), s) for s in range(1, states)]
    while len(edges) < transitions:
        edges.append((rng.randrange(states), rng.randrange(states)))
    rng.shuffle(edges)
    names = [f"s{i}" for i in range(states)]
    trans = [(f"t{i}", names[a], names[b],
              tuple(rng.randint(*update_range) for _ in range(dimension)))
             for i, (a, b) in enumerate(edges)]
    vass = Vass.build(dimension, names, [names[0]], trans, domain)
    labels = [tuple(rng.randint(*coef_range) for _ in range(dimension)) for _ in names]
    return vass, CostFunction.for_vass(vass, labels)
