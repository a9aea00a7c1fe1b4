"""Exact copositivity tests for small symmetric integer matrices.

A matrix M is copositive when x^T M x ≥ 0 for every x ≥ 0, strictly
copositive when additionally x^T M x = 0 forces x = 0.  Over integer
vectors the same statements hold by scaling, so these tests give exact
certificates for "no cycle combination has a negative (resp. nonpositive)
form".

Non-copositivity uses the Cottle–Habetler–Lemke / Hadeler criterion: if all
principal submatrices of order n−1 are copositive, M fails to be copositive
iff det M < 0 and adj M ≥ 0; then x = adj(M)·1 has x^T M x < 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .linalg import adjugate, integer_scale, nullspace

NEGATIVE = "negative"
ZERO = "zero"
COPOSITIVE = "copositive"
STRICT = "strict"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class CopositivityResult:
    status: str
    witness: Optional[Tuple[int, ...]] = None


def form(M: Sequence[Sequence[int]], x: Sequence[int]) -> int:
    n = len(x)
    return sum(M[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def _embed(n, idx, vals):
    x = [0] * n
    for i, v in zip(idx, vals):
        x[i] = v
    return tuple(x)


def _prunable(M, alive, strict) -> Optional[int]:
    for i in alive:
        if all(M[i][j] >= 0 for j in alive) and (M[i][i] > 0 or not strict):
            return i
    return None


def _reduce(M, strict) -> List[int]:
    alive = list(range(len(M)))
    while True:
        i = _prunable(M, alive, strict)
        if i is None:
            return alive
        alive.remove(i)


def copositivity(M: Sequence[Sequence[int]], max_size: int = 12) -> CopositivityResult:
    """COPOSITIVE, NEGATIVE (with x ≥ 0, x^T M x < 0) or UNDETERMINED."""
    n = len(M)
    for i in range(n):
        if M[i][i] < 0:
            return CopositivityResult(NEGATIVE, _embed(n, [i], [1]))
    alive = _reduce(M, strict=False)
    if len(alive) > max_size:
        return CopositivityResult(UNDETERMINED)
    for size in range(2, len(alive) + 1):
        for J in itertools.combinations(alive, size):
            if _prunable(M, J, strict=False) is not None:
                continue  # copositive iff a proper principal submatrix is
            sub = [[M[i][j] for j in J] for i in J]
            det, adj = adjugate(sub)
            if det < 0 and all(v >= 0 for row in adj for v in row):
                x = _embed(n, J, [sum(row) for row in adj])
                assert form(M, x) < 0
                return CopositivityResult(NEGATIVE, x)
    return CopositivityResult(COPOSITIVE)


def strict_copositivity(M: Sequence[Sequence[int]], max_size: int = 12) -> CopositivityResult:
    """STRICT, NEGATIVE, ZERO (x ≥ 0, x ≠ 0, x^T M x = 0) or UNDETERMINED."""
    res = copositivity(M, max_size)
    if res.status != COPOSITIVE:
        return res
    n = len(M)
    alive = _reduce(M, strict=True)
    if len(alive) > max_size:
        return CopositivityResult(UNDETERMINED)
    # A zero of minimal support J spans the one-dimensional kernel of M_J.
    for size in range(1, len(alive) + 1):
        for J in itertools.combinations(alive, size):
            if _prunable(M, J, strict=True) is not None:
                continue
            sub = [[M[i][j] for j in J] for i in J]
            ker = nullspace(sub, size)
            if len(ker) != 1:
                continue
            v = ker[0]
            if all(c > 0 for c in v) or all(c < 0 for c in v):
                x = _embed(n, J, [abs(c) for c in integer_scale(v)])
                assert form(M, x) == 0
                return CopositivityResult(ZERO, x)
    return CopositivityResult(STRICT)
