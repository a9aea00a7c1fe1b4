"""Core domain types and the path-summary algebra.

A path is a plain tuple of transition indices.  Everything here uses exact
integers; rationals only appear in :class:`ExtendedValue`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import StructureError

Vector = Tuple[int, ...]
Path = Tuple[int, ...]


class Domain(enum.Enum):
    INTEGER = "Z"
    NATURAL = "N"


@dataclass(frozen=True)
class Transition:
    source: int
    target: int
    update: Vector
    name: str


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vscale(c: int, u: Sequence[int]) -> Vector:
    return tuple(c * a for a in u)


@dataclass(frozen=True)
class Vass:
    """A VASS with named states and transitions.

    States and transitions are referred to by their position; names are
    kept for serialization and witnesses.
    """

    dimension: int
    states: Tuple[str, ...]
    initial: Tuple[int, ...]
    transitions: Tuple[Transition, ...]
    domain: Domain = Domain.INTEGER

    def __post_init__(self):
        if self.dimension < 1:
            raise StructureError("dimension must be at least 1")
        if len(set(self.states)) != len(self.states):
            raise StructureError("duplicate state names")
        nq = len(self.states)
        if not self.initial:
            raise StructureError("at least one initial state is required")
        for q in self.initial:
            if not 0 <= q < nq:
                raise StructureError(f"initial state index {q} out of range")
        names = set()
        for t in self.transitions:
            if not (0 <= t.source < nq and 0 <= t.target < nq):
                raise StructureError(f"transition {t.name!r} references an unknown state")
            if len(t.update) != self.dimension:
                raise StructureError(f"transition {t.name!r} has update of length "
                                     f"{len(t.update)}, expected {self.dimension}")
            if t.name in names:
                raise StructureError(f"duplicate transition name {t.name!r}")
            names.add(t.name)

    @classmethod
    def build(cls, dimension: int, states: Sequence[str], initial: Sequence[str],
              transitions: Iterable[Tuple[str, str, str, Sequence[int]]],
              domain: Domain = Domain.INTEGER) -> "Vass":
        """Build from names: transitions are ``(name, src, dst, update)``."""
        index = {s: i for i, s in enumerate(states)}
        try:
            trans = tuple(Transition(index[s], index[d], tuple(int(x) for x in u), n)
                          for n, s, d, u in transitions)
            init = tuple(index[q] for q in initial)
        except KeyError as exc:
            raise StructureError(f"unknown state {exc.args[0]!r}") from None
        return cls(dimension, tuple(states), init, trans, domain)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @cached_property
    def out_edges(self) -> Tuple[Tuple[int, ...], ...]:
        out = [[] for _ in self.states]
        for i, t in enumerate(self.transitions):
            out[t.source].append(i)
        return tuple(tuple(o) for o in out)

    @cached_property
    def _state_index(self):
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _transition_index(self):
        return {t.name: i for i, t in enumerate(self.transitions)}

    def state_index(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise StructureError(f"unknown state {name!r}") from None

    def transition_index(self, name: str) -> int:
        try:
            return self._transition_index[name]
        except KeyError:
            raise StructureError(f"unknown transition {name!r}") from None

    def path_from_names(self, names: Iterable[str]) -> Path:
        return tuple(self.transition_index(n) for n in names)

    def path_names(self, path: Sequence[int]) -> list:
        return [self.transitions[i].name for i in path]

    def with_domain(self, domain: Domain) -> "Vass":
        return Vass(self.dimension, self.states, self.initial, self.transitions, domain)

    def zero(self) -> Vector:
        return (0,) * self.dimension


@dataclass(frozen=True)
class CostFunction:
    """The labeling l: one natural coefficient vector per state (by index)."""

    labels: Tuple[Vector, ...]

    def __post_init__(self):
        for lab in self.labels:
            if any(c < 0 for c in lab):
                raise StructureError("cost coefficients must be natural numbers")

    @classmethod
    def uniform(cls, vass: Vass, a: Sequence[int]) -> "CostFunction":
        return cls.for_vass(vass, [tuple(a)] * vass.num_states)

    @classmethod
    def for_vass(cls, vass: Vass, labels: Sequence[Sequence[int]]) -> "CostFunction":
        labels = tuple(tuple(int(c) for c in lab) for lab in labels)
        if len(labels) != vass.num_states:
            raise StructureError("every state needs exactly one cost vector")
        if any(len(lab) != vass.dimension for lab in labels):
            raise StructureError("cost vector length differs from the dimension")
        return cls(labels)

    def is_uniform(self) -> bool:
        return len(set(self.labels)) <= 1


class Configuration(NamedTuple):
    state: int
    counters: Vector


@dataclass(frozen=True)
class Lasso:
    """A regular computation ``prefix · cycle^ω``."""

    prefix: Path
    cycle: Path

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))


@dataclass(frozen=True, eq=False)
class ExtendedValue:
    """Element of ℚ ∪ {−∞, +∞}; ``kind`` is −1, 0 or +1."""

    kind: int
    finite: Optional[Fraction] = field(default=None)

    @classmethod
    def of(cls, q: Union[int, Fraction]) -> "ExtendedValue":
        return cls(0, Fraction(q))

    def __post_init__(self):
        if self.kind == 0 and self.finite is None:
            raise StructureError("finite value missing")
        if self.kind != 0 and self.finite is not None:
            raise StructureError("infinite value carries no rational")

    def _key(self):
        return (self.kind, self.finite if self.kind == 0 else 0)

    def __eq__(self, other):
        if not isinstance(other, (ExtendedValue, int, Fraction)):
            return NotImplemented
        return self._key() == _ext(other)._key()

    def __hash__(self):
        return hash(self.finite) if self.kind == 0 else hash(("inf", self.kind))

    def __lt__(self, other):
        return self._key() < _ext(other)._key()

    def __le__(self, other):
        return self._key() <= _ext(other)._key()

    def __gt__(self, other):
        return self._key() > _ext(other)._key()

    def __ge__(self, other):
        return self._key() >= _ext(other)._key()

    def __str__(self):
        if self.kind < 0:
            return "-inf"
        if self.kind > 0:
            return "+inf"
        return str(self.finite)


NEG_INFINITY = ExtendedValue(-1)
POS_INFINITY = ExtendedValue(1)


def _ext(x) -> ExtendedValue:
    if isinstance(x, ExtendedValue):
        return x
    return ExtendedValue.of(x)


def check_path(vass: Vass, path: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Return ``(first state, last state)`` of a nonempty path, None if empty.

    Raises StructureError when consecutive transitions do not chain.
    """
    if not path:
        return None
    n = len(vass.transitions)
    for i in path:
        if not 0 <= i < n:
            raise StructureError(f"transition index {i} out of range")
    for a, b in zip(path, path[1:]):
        if vass.transitions[a].target != vass.transitions[b].source:
            raise StructureError(f"transitions {vass.transitions[a].name!r} and "
                                 f"{vass.transitions[b].name!r} do not chain")
    return vass.transitions[path[0]].source, vass.transitions[path[-1]].target


def is_cycle(vass: Vass, path: Sequence[int]) -> bool:
    ends = check_path(vass, path)
    return ends is not None and ends[0] == ends[1]


def check_lasso(vass: Vass, lasso: Lasso) -> int:
    """Validate the structure of a lasso; return the cycle's base state."""
    cyc = check_path(vass, lasso.cycle)
    if cyc is None or cyc[0] != cyc[1]:
        raise StructureError("lasso cycle must be a nonempty cycle")
    pre = check_path(vass, lasso.prefix)
    if pre is None:
        start = cyc[0]
    else:
        if pre[1] != cyc[0]:
            raise StructureError("prefix does not end where the cycle starts")
        start = pre[0]
    if start not in vass.initial:
        raise StructureError("lasso does not start in an initial state")
    return cyc[0]


def path_summary(vass: Vass, cost: CostFunction, path: Sequence[int]) -> Tuple[Vector, Vector]:
    """Gain (sum of updates) and Vals (sum of labels of visited states, last excluded)."""
    check_path(vass, path)
    k = vass.dimension
    gain = [0] * k
    vals = [0] * k
    for i in path:
        t = vass.transitions[i]
        lab = cost.labels[t.source]
        for j in range(k):
            gain[j] += t.update[j]
            vals[j] += lab[j]
    return tuple(gain), tuple(vals)


def sum_from(vass: Vass, cost: CostFunction, g: Sequence[int], path: Sequence[int]) -> int:
    """Total cost along ``path`` when the counters start at ``g``."""
    if len(g) != vass.dimension:
        raise StructureError("start vector has the wrong dimension")
    check_path(vass, path)
    z = list(g)
    total = 0
    for i in path:
        t = vass.transitions[i]
        total += dot(z, cost.labels[t.source])
        for j, d in enumerate(t.update):
            z[j] += d
    return total


@dataclass(frozen=True)
class Simulation:
    configurations: Tuple[Configuration, ...]
    first_negative: Optional[int]  # index into configurations, None if all >= 0

    @property
    def final(self) -> Configuration:
        return self.configurations[-1]


def simulate(vass: Vass, start: Configuration, path: Sequence[int]) -> Simulation:
    """Run ``path`` from ``start``; the first negative position is reported."""
    ends = check_path(vass, path)
    if ends is not None and ends[0] != start.state:
        raise StructureError("path does not begin at the start configuration's state")
    if len(start.counters) != vass.dimension:
        raise StructureError("configuration has the wrong dimension")
    confs = [Configuration(start.state, tuple(start.counters))]
    neg = 0 if any(c < 0 for c in start.counters) else None
    z = list(start.counters)
    for step, i in enumerate(path, 1):
        t = vass.transitions[i]
        for j, d in enumerate(t.update):
            z[j] += d
        confs.append(Configuration(t.target, tuple(z)))
        if neg is None and any(c < 0 for c in z):
            neg = step
    return Simulation(tuple(confs), neg)


def transition_matrix(vass: Vass, cost: CostFunction) -> Tuple[Tuple[int, ...], ...]:
    """A[i][j] = Gain(e_i)·Vals(e_j) + Gain(e_j)·Vals(e_i) over single transitions.

    For a multiset x of transitions, x^T A x = 2·Gain·Vals.
    """
    ts = vass.transitions
    vals = [cost.labels[t.source] for t in ts]
    return tuple(tuple(dot(ts[i].update, vals[j]) + dot(ts[j].update, vals[i])
                       for j in range(len(ts))) for i in range(len(ts)))


def transition_counts(vass: Vass, path: Iterable[int]) -> Vector:
    counts = [0] * len(vass.transitions)
    for i in path:
        counts[i] += 1
    return tuple(counts)
