"""Bounded exact solver for integer quadratic constraint systems.

Constraints: x^T A x + a·x + d ≤ 0 (or = 0), and B x ≤ c.  The search is a
depth-first branch over variables in index order with values ascending, so
the first solution found is lexicographically minimal inside the box.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import StructureError


@dataclass(frozen=True)
class QuadConstraint:
    A: Tuple[Tuple[int, ...], ...]
    a: Tuple[int, ...]
    d: int
    relation: str = "<="

    def value(self, x: Sequence[int]) -> int:
        n = len(x)
        q = sum(self.A[i][j] * x[i] * x[j] for i in range(n) for j in range(n) if self.A[i][j])
        return q + sum(ai * xi for ai, xi in zip(self.a, x)) + self.d

    def holds(self, x: Sequence[int]) -> bool:
        v = self.value(x)
        return v == 0 if self.relation == "=" else v <= 0


@dataclass(frozen=True)
class IqpInstance:
    nvars: int
    quadratic: Tuple[QuadConstraint, ...] = ()
    B: Tuple[Tuple[int, ...], ...] = ()
    c: Tuple[int, ...] = ()
    nonneg: Optional[Tuple[bool, ...]] = None

    def __post_init__(self):
        n = self.nvars
        if self.nonneg is None:
            object.__setattr__(self, "nonneg", (True,) * n)
        if len(self.nonneg) != n:
            raise StructureError("domain flags do not match the variable count")
        if len(self.B) != len(self.c):
            raise StructureError("B and c have different lengths")
        for row in self.B:
            if len(row) != n:
                raise StructureError("linear constraint has the wrong width")
        for q in self.quadratic:
            if len(q.A) != n or any(len(r) != n for r in q.A) or len(q.a) != n:
                raise StructureError("quadratic constraint has the wrong dimension")
            if any(q.A[i][j] != q.A[j][i] for i in range(n) for j in range(i)):
                raise StructureError("quadratic matrix is not symmetric")
            if q.relation not in ("<=", "="):
                raise StructureError(f"unknown relation {q.relation!r}")

    def satisfied(self, x: Sequence[int]) -> bool:
        if len(x) != self.nvars:
            return False
        if any(f and v < 0 for f, v in zip(self.nonneg, x)):
            return False
        if any(sum(b * v for b, v in zip(row, x)) > ci for row, ci in zip(self.B, self.c)):
            return False
        return all(q.holds(x) for q in self.quadratic)


class LinearBuilder:
    """Accumulates linear rows; equalities become two opposite inequalities."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: List[Tuple[int, ...]] = []
        self.rhs: List[int] = []

    def le(self, coeffs, bound: int):
        row = tuple(coeffs) if len(coeffs) == self.nvars else _dense(coeffs, self.nvars)
        self.rows.append(row)
        self.rhs.append(bound)

    def ge(self, coeffs, bound: int):
        row = tuple(coeffs) if len(coeffs) == self.nvars else _dense(coeffs, self.nvars)
        self.le(tuple(-v for v in row), -bound)

    def eq(self, coeffs, bound: int):
        self.le(coeffs, bound)
        self.ge(coeffs, bound)


def _dense(sparse, n):
    row = [0] * n
    for i, v in dict(sparse).items():
        row[i] += v
    return tuple(row)


@dataclass(frozen=True)
class Sat:
    x: Tuple[int, ...]


@dataclass(frozen=True)
class BoundedUnsat:
    bound: int


@dataclass(frozen=True)
class Unknown:
    nodes: int


class _BudgetExceeded(Exception):
    pass


def _floordiv(a, b):
    return a // b


def _ceildiv(a, b):
    return -((-a) // b)


class Search:
    """Iterator over the solutions in the box, in lexicographic order.

    After iteration stops, ``complete`` tells whether the box was exhausted
    (True) or the node budget ran out (False).
    """

    def __init__(self, inst: IqpInstance, box_bound: int, node_budget: int):
        if box_bound < 0 or node_budget < 1:
            raise StructureError("box_bound must be >= 0 and node_budget >= 1")
        self.inst = inst
        self.box = box_bound
        self.budget = node_budget
        self.nodes = 0
        self.complete = False
        self.rows = [([(j, v) for j, v in enumerate(row) if v], ci)
                     for row, ci in zip(inst.B, inst.c)]
        self.quads = []
        for q in inst.quadratic:
            terms = []
            n = inst.nvars
            for i in range(n):
                if q.A[i][i]:
                    terms.append((i, i, q.A[i][i]))
                for j in range(i + 1, n):
                    if q.A[i][j]:
                        terms.append((i, j, 2 * q.A[i][j]))
            lin = [(i, v) for i, v in enumerate(q.a) if v]
            self.quads.append((terms, lin, q.d, q.relation))

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        n = self.inst.nvars
        lo = [0 if f else -self.box for f in self.inst.nonneg]
        hi = [self.box] * n
        try:
            if self._propagate(lo, hi):
                yield from self._dfs(lo, hi)
            self.complete = True
        except _BudgetExceeded:
            self.complete = False

    def _dfs(self, lo, hi):
        n = self.inst.nvars
        v = next((i for i in range(n) if lo[i] < hi[i]), None)
        if v is None:
            x = tuple(lo)
            if self.inst.satisfied(x):
                yield x
            return
        for val in range(lo[v], hi[v] + 1):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExceeded
            lo2, hi2 = lo[:], hi[:]
            lo2[v] = hi2[v] = val
            if self._propagate(lo2, hi2):
                yield from self._dfs(lo2, hi2)

    def _propagate(self, lo, hi) -> bool:
        for _ in range(50):
            changed = False
            for terms, c in self.rows:
                act = 0
                for j, a in terms:
                    act += a * (lo[j] if a > 0 else hi[j])
                if act > c:
                    return False
                slack = c - act
                for j, a in terms:
                    if a > 0:
                        nb = lo[j] + _floordiv(slack, a)
                        if nb < hi[j]:
                            hi[j] = nb
                            changed = True
                    else:
                        nb = hi[j] - _floordiv(slack, -a)
                        if nb > lo[j]:
                            lo[j] = nb
                            changed = True
                    if lo[j] > hi[j]:
                        return False
            if not changed:
                break
        for terms, lin, d, rel in self.quads:
            low, high = d, d
            for i, j, cf in terms:
                if i == j:
                    a, b = lo[i], hi[i]
                    sq_hi = max(a * a, b * b)
                    sq_lo = 0 if a <= 0 <= b else min(a * a, b * b)
                    pl, ph = (cf * sq_lo, cf * sq_hi) if cf > 0 else (cf * sq_hi, cf * sq_lo)
                else:
                    prods = (lo[i] * lo[j], lo[i] * hi[j], hi[i] * lo[j], hi[i] * hi[j])
                    pl, ph = cf * min(prods), cf * max(prods)
                    if cf < 0:
                        pl, ph = ph, pl
                low += pl
                high += ph
            for i, a in lin:
                if a > 0:
                    low += a * lo[i]
                    high += a * hi[i]
                else:
                    low += a * hi[i]
                    high += a * lo[i]
            if low > 0 or (rel == "=" and high < 0):
                return False
        return True


def iter_solutions(inst: IqpInstance, box_bound: int = 64,
                   node_budget: int = 200_000) -> Search:
    return Search(inst, box_bound, node_budget)


def solve(inst: IqpInstance, box_bound: int = 64, node_budget: int = 200_000):
    """Sat(x) with x lexicographically minimal in the box, BoundedUnsat, or Unknown."""
    search = Search(inst, box_bound, node_budget)
    for x in search:
        if not inst.satisfied(x):  # re-check before reporting
            raise AssertionError("solver produced a non-solution")
        return Sat(x)
    if search.complete:
        return BoundedUnsat(box_bound)
    return Unknown(search.nodes)


def solve_escalating(inst: IqpInstance, start: int = 4, cap: int = 64,
                     node_budget: int = 200_000):
    """Solve with boxes start, 2·start, … up to cap; return the last verdict."""
    box = max(1, start)
    while True:
        verdict = solve(inst, min(box, cap), node_budget)
        if isinstance(verdict, Sat) or box >= cap:
            return verdict
        if isinstance(verdict, Unknown):
            return verdict
        box *= 2


def dump(inst: IqpInstance) -> str:
    """Human-readable matrix dump (debugging aid, not a stable format)."""
    lines = [f"vars {inst.nvars}",
             "domain " + " ".join("N" if f else "Z" for f in inst.nonneg)]
    for q in inst.quadratic:
        lines.append(f"quad {q.relation} d={q.d}")
        lines.append("  a " + " ".join(map(str, q.a)))
        for row in q.A:
            lines.append("  A " + " ".join(map(str, row)))
    for row, ci in zip(inst.B, inst.c):
        lines.append("lin " + " ".join(map(str, row)) + f" <= {ci}")
    return "\n".join(lines) + "\n"
