"""Graph utilities over the control graph of a VASS."""

from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .model import Path, Vass


def control_graph(vass: Vass, states: Optional[Set[int]] = None) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(vass.num_states) if states is None else states)
    for t in vass.transitions:
        if states is None or (t.source in states and t.target in states):
            g.add_edge(t.source, t.target)
    return g


def reachable_states(vass: Vass, sources: Optional[Sequence[int]] = None) -> Set[int]:
    seen = set(vass.initial if sources is None else sources)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for i in vass.out_edges[q]:
            r = vass.transitions[i].target
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def cyclic_sccs(vass: Vass, within: Optional[Set[int]] = None) -> List[Tuple[int, ...]]:
    """SCCs (restricted to ``within``) that carry at least one internal transition.

    Each SCC is a sorted tuple; the list is sorted by smallest member.
    """
    g = control_graph(vass, within)
    out = []
    for comp in nx.strongly_connected_components(g):
        comp = set(comp)
        if any(t.source in comp and t.target in comp for t in vass.transitions):
            out.append(tuple(sorted(comp)))
    return sorted(out)


def shortest_path(vass: Vass, sources: Sequence[int], target: int,
                  within: Optional[Set[int]] = None) -> Optional[Path]:
    """BFS path (transition indices) from any source to ``target``.

    Transitions are explored in index order, so the result is deterministic.
    """
    parent: Dict[int, Optional[Tuple[int, int]]] = {}
    dq = deque()
    for s in sources:
        if s not in parent:
            parent[s] = None
            dq.append(s)
    while dq:
        q = dq.popleft()
        if q == target:
            path = []
            while parent[q] is not None:
                q, i = parent[q]
                path.append(i)
            return tuple(reversed(path))
        for i in vass.out_edges[q]:
            r = vass.transitions[i].target
            if within is not None and r not in within:
                continue
            if r not in parent:
                parent[r] = (q, i)
                dq.append(r)
    return None


def simple_cycles(vass: Vass, states: Optional[Sequence[int]] = None,
                  limit: Optional[int] = None) -> Iterator[Path]:
    """Simple cycles (no repeated state) as transition tuples.

    Each cycle is reported once, rotated to start at its smallest state.
    Parallel transitions give distinct cycles.  Order: by base state, then
    depth-first in transition index order.
    """
    allowed = set(range(vass.num_states)) if states is None else set(states)
    count = 0
    for base in sorted(allowed):
        on_path = {base}
        stack = [(base, iter(vass.out_edges[base]))]
        path: List[int] = []
        while stack:
            q, it = stack[-1]
            advanced = False
            for i in it:
                r = vass.transitions[i].target
                if r == base:
                    yield tuple(path) + (i,)
                    count += 1
                    if limit is not None and count >= limit:
                        return
                elif r in allowed and r > base and r not in on_path:
                    path.append(i)
                    on_path.add(r)
                    stack.append((r, iter(vass.out_edges[r])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if path:
                    on_path.discard(q)
                    path.pop()


def rotate(vass: Vass, cycle: Path, state: int) -> Path:
    """Rotation of ``cycle`` starting at ``state`` (first occurrence)."""
    for k, i in enumerate(cycle):
        if vass.transitions[i].source == state:
            return cycle[k:] + cycle[:k]
    raise ValueError("state not on cycle")


def support_connected(vass: Vass, counts: Sequence[int], extra: Sequence[int] = ()) -> bool:
    """Weak connectivity of the support of ``counts`` together with ``extra`` states."""
    g = nx.Graph()
    g.add_nodes_from(extra)
    for i, c in enumerate(counts):
        if c:
            t = vass.transitions[i]
            g.add_edge(t.source, t.target)
    return g.number_of_nodes() == 0 or nx.is_connected(g)


def euler_path(vass: Vass, counts: Sequence[int], start: int, end: int) -> Optional[Path]:
    """Path from ``start`` to ``end`` using transition i exactly counts[i] times.

    Returns None when degrees or connectivity make this impossible.
    Hierholzer with out-edges consumed in index order.
    """
    if any(c < 0 for c in counts):
        return None
    total = sum(counts)
    if total == 0:
        return () if start == end else None
    balance: Dict[int, int] = {}
    for i, c in enumerate(counts):
        if c:
            t = vass.transitions[i]
            balance[t.source] = balance.get(t.source, 0) + c
            balance[t.target] = balance.get(t.target, 0) - c
    balance[start] = balance.get(start, 0) - 1
    balance[end] = balance.get(end, 0) + 1
    if any(v != 0 for v in balance.values()):
        return None
    if not support_connected(vass, counts, (start, end)):
        return None
    remaining = list(counts)
    ptr = {q: 0 for q in range(vass.num_states)}
    stack: List[Tuple[int, Optional[int]]] = [(start, None)]
    out: List[int] = []
    while stack:
        q, via = stack[-1]
        edges = vass.out_edges[q]
        while ptr[q] < len(edges) and remaining[edges[ptr[q]]] == 0:
            ptr[q] += 1
        if ptr[q] < len(edges):
            i = edges[ptr[q]]
            remaining[i] -= 1
            stack.append((vass.transitions[i].target, i))
        else:
            stack.pop()
            if via is not None:
                out.append(via)
    out.reverse()
    if len(out) != total:
        return None
    return tuple(out)
