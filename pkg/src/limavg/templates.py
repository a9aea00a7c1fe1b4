"""Templates: cycles written as α0 β1^n1 α1 … βp^np αp.

Matrices are returned as tuples of tuples of ints; index i of a p-vector
refers to β_{i+1}.
"""

from __future__ import annotations

import itertools
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import MisuseError, StructureError
from .linalg import nullspace
from .model import (CostFunction, Path, Vass, check_path, dot, path_summary, sum_from,
                    transition_counts, vadd)

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Template:
    connectors: Tuple[Path, ...]
    cycles: Tuple[Path, ...]

    def __post_init__(self):
        object.__setattr__(self, "connectors", tuple(tuple(a) for a in self.connectors))
        object.__setattr__(self, "cycles", tuple(tuple(b) for b in self.cycles))
        if len(self.connectors) != len(self.cycles) + 1:
            raise StructureError("a template has one more connector than cycles")

    @property
    def p(self) -> int:
        return len(self.cycles)

    def pieces(self):
        """α0, β1, α1, …, βp, αp."""
        out = [self.connectors[0]]
        for b, a in zip(self.cycles, self.connectors[1:]):
            out += [b, a]
        return out

    def size(self) -> int:
        return sum(map(len, self.connectors)) + sum(map(len, self.cycles))


@dataclass(frozen=True)
class TemplateCoefficients:
    B: Matrix
    c: Tuple[int, ...]
    e: int

    def value2(self, n: Sequence[int]) -> int:
        """n^T B n + c·n + e, i.e. twice Sum_0 of the instantiated cycle."""
        return quad(self.B, n) + dot(self.c, n) + self.e


@dataclass(frozen=True)
class LinearData:
    d: Tuple[int, ...]
    h: int


@dataclass(frozen=True)
class TransMap:
    """Affine map n ↦ constant + Σ n[i]·linear[i] into transition counts."""

    constant: Tuple[int, ...]
    linear: Tuple[Tuple[int, ...], ...]

    def __call__(self, n: Sequence[int]) -> Tuple[int, ...]:
        out = list(self.constant)
        for ni, col in zip(n, self.linear):
            for j, x in enumerate(col):
                out[j] += ni * x
        return tuple(out)

    def linear_part(self, n: Sequence) -> tuple:
        out = [0] * len(self.constant)
        for ni, col in zip(n, self.linear):
            for j, x in enumerate(col):
                out[j] += ni * x
        return tuple(out)


@dataclass(frozen=True)
class LinearSystem:
    """Equalities ``coeffs · n = rhs`` describing one S_P."""

    P: Tuple[int, ...]
    equations: Tuple[Tuple[Tuple[int, ...], int], ...]

    def satisfied_by(self, n: Sequence[int]) -> bool:
        return all(dot(a, n) == b for a, b in self.equations)

    def homogeneous(self) -> "LinearSystem":
        return LinearSystem(self.P, tuple((a, 0) for a, _ in self.equations))


def quad(B: Sequence[Sequence[int]], n: Sequence[int]) -> int:
    return sum(B[i][j] * n[i] * n[j] for i in range(len(n)) for j in range(len(n)))


def check_template(vass: Vass, tpl: Template) -> Optional[int]:
    """Validate chaining; return the start state (None if everything is empty)."""
    start = cur = None
    for k, piece in enumerate(tpl.pieces()):
        ends = check_path(vass, piece)
        if ends is None:
            continue
        s, e = ends
        if k % 2 == 1 and s != e:
            raise StructureError(f"template cycle {k // 2 + 1} is not a cycle")
        if cur is not None and s != cur:
            raise StructureError("template pieces do not chain")
        if start is None:
            start = s
        cur = e
    if start is not None and cur != start:
        raise StructureError("α0…αp does not close the template into a cycle")
    return start


def instantiate(tpl: Template, n: Sequence[int]) -> Path:
    if len(n) != tpl.p:
        raise StructureError(f"expected {tpl.p} multiplicities, got {len(n)}")
    if any(x < 0 for x in n):
        raise StructureError("multiplicities must be natural numbers")
    out = list(tpl.connectors[0])
    for b, k, a in zip(tpl.cycles, n, tpl.connectors[1:]):
        out.extend(b * k)
        out.extend(a)
    return tuple(out)


def is_minimal(vass: Vass, tpl: Template) -> bool:
    if any(len(a) >= vass.num_states for a in tpl.connectors):
        return False
    if len(set(tpl.cycles)) != tpl.p:
        return False
    for b in tpl.cycles:
        seen = [vass.transitions[i].source for i in b]
        if not b or len(set(seen)) != len(seen):
            return False
    return True


def _first_inner_cycle(vass: Vass, path: Path) -> Optional[Tuple[int, int]]:
    """Positions (i, k) such that path[i:k] is the first simple cycle inside path."""
    if not path:
        return None
    first = {vass.transitions[path[0]].source: 0}
    for k, idx in enumerate(path, 1):
        q = vass.transitions[idx].target
        if q in first:
            return first[q], k
        first[q] = k
    return None


def minimal_factorization(vass: Vass, cost: CostFunction, cycle: Path,
                          g: Sequence[int]) -> Tuple[Template, Tuple[int, ...]]:
    """Rewrite a cycle as a minimal template without increasing Sum_g.

    Repeatedly (a) cut the first simple cycle out of the first connector
    that visits a state twice, else (b) merge the first pair of equal
    cycles into whichever slot gives the smaller Sum_g (earlier slot on
    ties).  Both moves preserve the transition multiset.
    """
    ends = check_path(vass, cycle)
    if ends is None or ends[0] != ends[1]:
        raise MisuseError("minimal_factorization expects a nonempty cycle")
    conns: List[Path] = [tuple(cycle)]
    cycs: List[Path] = []
    mult: List[int] = []
    while True:
        for idx, a in enumerate(conns):
            cut = _first_inner_cycle(vass, a)
            if cut is not None:
                i, k = cut
                conns[idx:idx + 1] = [a[:i], a[k:]]
                cycs.insert(idx, a[i:k])
                mult.insert(idx, 1)
                break
        else:
            pair = next(((i, j) for i, j in itertools.combinations(range(len(cycs)), 2)
                         if cycs[i] == cycs[j]), None)
            if pair is None:
                break
            i, j = pair
            # all copies at slot i
            c1 = conns[:j] + [conns[j] + conns[j + 1]] + conns[j + 2:]
            y1, m1 = cycs[:j] + cycs[j + 1:], mult[:j] + mult[j + 1:]
            m1[i] += mult[j]
            # all copies at slot j
            c2 = conns[:i] + [conns[i] + conns[i + 1]] + conns[i + 2:]
            y2, m2 = cycs[:i] + cycs[i + 1:], mult[:i] + mult[i + 1:]
            m2[j - 1] += mult[i]
            s1 = sum_from(vass, cost, g, instantiate(Template(c1, y1), m1))
            s2 = sum_from(vass, cost, g, instantiate(Template(c2, y2), m2))
            conns, cycs, mult = (c1, y1, m1) if s1 <= s2 else (c2, y2, m2)
    return Template(tuple(conns), tuple(cycs)), tuple(mult)


def _summaries(vass, cost, paths):
    return [path_summary(vass, cost, x) for x in paths]


def template_coefficients(vass: Vass, cost: CostFunction, tpl: Template) -> TemplateCoefficients:
    """(B, c, e) with 2·Sum_0(Tpl(n)) = n^T B n + c·n + e."""
    check_template(vass, tpl)
    p = tpl.p
    cyc = _summaries(vass, cost, tpl.cycles)
    con = _summaries(vass, cost, tpl.connectors)
    B = tuple(tuple(dot(cyc[min(i, j)][0], cyc[max(i, j)][1]) for j in range(p))
              for i in range(p))
    c = []
    for i in range(p):
        gi, vi = cyc[i]
        ci = 2 * sum_from(vass, cost, vass.zero(), tpl.cycles[i]) - dot(gi, vi)
        ci += 2 * sum(dot(con[j][0], vi) for j in range(i + 1))        # α_j before β_i
        ci += 2 * sum(dot(gi, con[j][1]) for j in range(i + 1, p + 1))  # α_j after β_i
        c.append(ci)
    e = 2 * sum_from(vass, cost, vass.zero(), sum(tpl.connectors, ()))
    return TemplateCoefficients(B, tuple(c), e)


def closing_cycle(tpl: Template) -> Path:
    """β_{p+1} = α0 α1 … αp."""
    return sum(tpl.connectors, ())


def balance_matrix(vass: Vass, cost: CostFunction, tpl: Template) -> Matrix:
    """A with (n,1)^T A (n,1) = 2·Gain(Tpl(n))·Vals(Tpl(n))."""
    check_template(vass, tpl)
    s = _summaries(vass, cost, list(tpl.cycles) + [closing_cycle(tpl)])
    m = len(s)
    return tuple(tuple(dot(s[i][0], s[j][1]) + dot(s[j][0], s[i][1]) for j in range(m))
                 for i in range(m))


def linear_data(vass: Vass, cost: CostFunction, tpl: Template) -> LinearData:
    """Linear substitute d·n + h for n^T B n (meaningful for linear templates)."""
    check_template(vass, tpl)
    cyc = _summaries(vass, cost, tpl.cycles)
    g0, v0 = path_summary(vass, cost, closing_cycle(tpl))
    d = tuple(-(dot(gi, v0) + dot(g0, vi)) for gi, vi in cyc)
    return LinearData(d, -dot(g0, v0))


def extended_template(tpl: Template) -> Template:
    """Tpl with the closing cycle β_{p+1} appended after αp."""
    return Template(tpl.connectors + ((),), tpl.cycles + (closing_cycle(tpl),))


def reversed_template(tpl: Template, keep_empty: bool = False) -> Template:
    """Cycles in reverse order β_{p+1}, βp, …, β1 with rotated connectors.

    Connectors: γ_p = α0…α_{p−1}, γ_i = α_{i+1}…αp α0…α_{i−1}, γ_0 = α1…αp.
    An empty β_{p+1} is dropped unless ``keep_empty``.
    """
    a = tpl.connectors
    p = tpl.p
    beta = closing_cycle(tpl)

    def gamma(i):
        return sum(a[i + 1:], ()) + sum(a[:i], ())

    conns = [()] + [gamma(i) for i in range(p, -1, -1)]
    cycs = [beta] + [tpl.cycles[i - 1] for i in range(p, 0, -1)]
    if not beta and not keep_empty:
        conns = [conns[0] + conns[1]] + conns[2:]
        cycs = cycs[1:]
    return Template(tuple(conns), tuple(cycs))


def trans_map(vass: Vass, tpl: Template) -> TransMap:
    return TransMap(transition_counts(vass, closing_cycle(tpl)),
                    tuple(transition_counts(vass, b) for b in tpl.cycles))


def _subvector(cols: Sequence[Sequence[int]], x: List[Fraction], m: int) -> List[Fraction]:
    """Shrink supp(x) to ≤ m keeping Σ x_i cols_i fixed, x ≥ 0 (kernel moves)."""
    while True:
        supp = [i for i, v in enumerate(x) if v != 0]
        if len(supp) <= m:
            return x
        rows = [[cols[i][r] for i in supp] for r in range(len(cols[0]))]
        w = nullspace(rows, len(supp))[0]
        if all(v <= 0 for v in w):
            w = [-v for v in w]
        step = min(x[i] / v for i, v in zip(supp, w) if v > 0)
        for i, v in zip(supp, w):
            x[i] -= step * v
            if x[i] < 0:  # rounding cannot happen with Fractions; guard anyway
                raise AssertionError("kernel step left the orthant")


def decompose_short_vectors(vass: Vass, tpl: Template,
                            n: Sequence[int]) -> List[Tuple[Fraction, Tuple[int, ...]]]:
    """Write n = Σ r_i z_i with |supp(z_i)| ≤ |δ| and Trans(z_i) = t_i·Trans(n).

    Trans is taken as the linear part of :func:`trans_map` (cycle counts
    only): the connector constant cannot scale with t.
    """
    if not any(n):
        raise MisuseError("cannot decompose the zero vector")
    tm = trans_map(vass, tpl)
    if any(not any(col) for col in tm.linear):
        raise MisuseError("templates with empty cycles have no support bound")
    m = len(vass.transitions)
    pieces = _decompose(tm.linear, tuple(int(v) for v in n), m)
    target = tm.linear_part(n)
    for _, z in pieces:
        if not _proportional(tm.linear_part(z), target):
            raise AssertionError("decomposition lost proportionality")
    return pieces


def _decompose(cols, n, m):
    if sum(1 for v in n if v) <= m:
        return [(Fraction(1), n)]
    x = _subvector(cols, [Fraction(v) for v in n], m)
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    n0 = tuple(int(v * den) for v in x)
    r = min(Fraction(a, b) for a, b in zip(n, n0) if b)
    k = tuple(r.denominator * a - r.numerator * b for a, b in zip(n, n0))
    out = [(r, n0)]
    if any(k):
        out += [(w / r.denominator, y) for w, y in _decompose(cols, k, m)]
    return out


def _proportional(u, v) -> bool:
    ratio = None
    for a, b in zip(u, v):
        if b == 0:
            if a != 0:
                return False
            continue
        r = Fraction(a, b)
        if r <= 0 or (ratio is not None and r != ratio):
            return False
        ratio = r
    return ratio is not None


def balanced_linear_systems(vass: Vass, cost: CostFunction,
                            tpl: Template) -> Iterator[LinearSystem]:
    """The systems S_P, lazily, ordered by |P| then lexicographically.

    S_P: n[i] = 0 for i ∈ P; (A·(n,1))_i = 0 for i ∉ P and for the row of
    the closing cycle.  Sound and complete for balance when no regular run
    has value −∞.
    """
    A = balance_matrix(vass, cost, tpl)
    p = tpl.p
    for size in range(p + 1):
        for P in itertools.combinations(range(p), size):
            eqs = []
            for i in range(p + 1):
                if i in P:
                    eqs.append((tuple(int(j == i) for j in range(p)), 0))
                else:
                    eqs.append((tuple(A[i][:p]), -A[i][p]))
            yield LinearSystem(P, tuple(eqs))
