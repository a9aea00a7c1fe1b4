"""Bounded configuration reachability for VASS over the naturals."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import StructureError
from .model import Configuration, Path, Vass, simulate


class ReachStatus(enum.Enum):
    REACHABLE = "REACHABLE"
    NOT_REACHABLE = "NOT_REACHABLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ReachQuery:
    vass: Vass
    source: Configuration
    target: Configuration
    budget: int = 100_000
    counter_cap: Optional[Sequence[int]] = None

    def __post_init__(self):
        if self.budget < 1:
            raise StructureError("budget must be positive")
        for conf in (self.source, self.target):
            if len(conf.counters) != self.vass.dimension:
                raise StructureError("configuration has the wrong dimension")
            if any(c < 0 for c in conf.counters):
                raise StructureError("configurations over ℕ have nonnegative counters")
            if not 0 <= conf.state < self.vass.num_states:
                raise StructureError("unknown state in configuration")


@dataclass(frozen=True)
class ReachResult:
    status: ReachStatus
    path: Optional[Path] = None
    explored: int = 0


def reachable(query: ReachQuery) -> ReachResult:
    """Breadth-first search over configurations.

    NOT_REACHABLE is reported only if the frontier closed without any cap
    (budget or counter cap) having cut off a successor.
    """
    vass = query.vass
    src = Configuration(query.source.state, tuple(query.source.counters))
    tgt = Configuration(query.target.state, tuple(query.target.counters))
    cap = None if query.counter_cap is None else tuple(query.counter_cap)
    parent = {src: None}
    dq = deque([src])
    truncated = False
    while dq:
        conf = dq.popleft()
        if conf == tgt:
            path = []
            while parent[conf] is not None:
                conf, i = parent[conf]
                path.append(i)
            path = tuple(reversed(path))
            run = simulate(vass, src, path)
            assert run.first_negative is None and run.final == tgt
            return ReachResult(ReachStatus.REACHABLE, path, len(parent))
        for i in vass.out_edges[conf.state]:
            t = vass.transitions[i]
            z = tuple(a + b for a, b in zip(conf.counters, t.update))
            if any(v < 0 for v in z):
                continue
            if cap is not None and any(v > c for v, c in zip(z, cap)):
                truncated = True
                continue
            nxt = Configuration(t.target, z)
            if nxt in parent:
                continue
            if len(parent) >= query.budget:
                truncated = True
                continue
            parent[nxt] = (conf, i)
            dq.append(nxt)
    status = ReachStatus.UNKNOWN if truncated else ReachStatus.NOT_REACHABLE
    return ReachResult(status, None, len(parent))
