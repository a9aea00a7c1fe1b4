"""Line-based text format for VASS models, plus JSON rendering of answers.

Grammar (``#`` starts a comment)::

    domain Z|N
    dim k
    init q ...
    state q
    trans name src dst d1 ... dk
    cost q a1 ... ak

States are declared by ``state`` or ``cost`` lines; every state needs
exactly one ``cost`` line.  State order is order of first declaration,
transition order is file order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import StructureError
from .model import CostFunction, Domain, ExtendedValue, Transition, Vass

_INT = re.compile(r"[+-]?\d+\Z")
_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\Z")
KEYWORDS = ("domain", "dim", "init", "state", "trans", "cost")


class ModelError(StructureError):
    """Diagnostic attached to a position in the model text."""

    kind = "model"

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {self.kind} error: {message}")
        self.line = line
        self.column = column
        self.message = message


class ModelSyntaxError(ModelError):
    kind = "syntax"


class ModelSemanticError(ModelError):
    kind = "semantic"


@dataclass(frozen=True)
class ModelDocument:
    vass: Vass
    cost: CostFunction
    spans: Dict[str, Tuple[int, int]] = field(default_factory=dict, compare=False)


def _tokens(line: str) -> List[Tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _ints(toks, lineno) -> Tuple[int, ...]:
    out = []
    for tok, col in toks:
        if not _INT.match(tok):
            raise ModelSyntaxError(lineno, col, f"expected an integer, found {tok!r}")
        out.append(int(tok))
    return tuple(out)


def parse_model(text: str) -> ModelDocument:
    """Parse a model document; errors carry line and column."""
    domain = dim = None
    dim_pos = (1, 1)
    inits: List[Tuple[str, int, int]] = []
    states: Dict[str, Tuple[int, int]] = {}
    costs: Dict[str, Tuple[Tuple[int, ...], int, int]] = {}
    trans: List[Tuple[str, str, str, Tuple[int, ...], int, Dict[str, int]]] = []
    seen_trans: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        (kw, kcol), args = toks[0], toks[1:]
        end = len(raw.split("#", 1)[0].rstrip()) + 1
        if kw not in KEYWORDS:
            raise ModelSyntaxError(lineno, kcol, f"unknown keyword {kw!r}")
        if kw == "domain":
            if len(args) != 1 or args[0][0] not in ("Z", "N"):
                col = args[0][1] if args else end
                raise ModelSyntaxError(lineno, col, "expected 'domain Z' or 'domain N'")
            if domain is not None:
                raise ModelSemanticError(lineno, kcol, "domain declared twice")
            domain = Domain(args[0][0])
        elif kw == "dim":
            if len(args) != 1:
                raise ModelSyntaxError(lineno, args[1][1] if args else end,
                                       "expected 'dim k'")
            (k,) = _ints(args, lineno)
            if dim is not None:
                raise ModelSemanticError(lineno, kcol, "dimension declared twice")
            if k < 1:
                raise ModelSemanticError(lineno, args[0][1], "dimension must be at least 1")
            dim, dim_pos = k, (lineno, args[0][1])
        elif kw == "init":
            if not args:
                raise ModelSyntaxError(lineno, end, "init needs at least one state")
            inits.extend((tok, lineno, col) for tok, col in args)
        elif kw == "state":
            if len(args) != 1:
                raise ModelSyntaxError(lineno, args[1][1] if args else end,
                                       "expected 'state name'")
            states.setdefault(args[0][0], (lineno, args[0][1]))
        elif kw == "trans":
            if len(args) < 3:
                raise ModelSyntaxError(lineno, end, "expected 'trans name src dst d1 ... dk'")
            (name, ncol), (src, scol), (dst, dcol) = args[:3]
            upd = _ints(args[3:], lineno)
            if name in seen_trans:
                raise ModelSemanticError(lineno, ncol, f"duplicate transition {name!r}")
            seen_trans[name] = lineno
            trans.append((name, src, dst, upd, lineno,
                          {"name": ncol, "src": scol, "dst": dcol,
                           "upd": args[3][1] if len(args) > 3 else end}))
        else:  # cost
            if not args:
                raise ModelSyntaxError(lineno, end, "expected 'cost state a1 ... ak'")
            (q, qcol) = args[0]
            coeffs = _ints(args[1:], lineno)
            for (tok, col), v in zip(args[1:], coeffs):
                if v < 0:
                    raise ModelSemanticError(lineno, col, "negative coefficient")
            if q in costs:
                raise ModelSemanticError(lineno, qcol, f"second cost line for {q!r}")
            costs[q] = (coeffs, lineno, args[1][1] if len(args) > 1 else end)
            states.setdefault(q, (lineno, qcol))

    if dim is None:
        raise ModelSemanticError(1, 1, "missing 'dim' line")
    if not states:
        raise ModelSemanticError(1, 1, "no states declared")
    for name, src, dst, upd, lineno, cols in trans:
        for q, col in ((src, cols["src"]), (dst, cols["dst"])):
            if q not in states:
                raise ModelSemanticError(lineno, col, f"unknown state {q!r}")
        if len(upd) != dim:
            raise ModelSemanticError(lineno, cols["upd"],
                                     f"dimension mismatch: {len(upd)} values, dim is {dim} "
                                     f"(line {dim_pos[0]})")
    for q, (line, col) in states.items():
        if q not in costs:
            raise ModelSemanticError(line, col, f"state {q!r} has no cost line")
        coeffs, cline, ccol = costs[q]
        if len(coeffs) != dim:
            raise ModelSemanticError(cline, ccol,
                                     f"dimension mismatch: {len(coeffs)} values, dim is {dim}")
    if not inits:
        raise ModelSemanticError(1, 1, "missing 'init' line")
    for q, line, col in inits:
        if q not in states:
            raise ModelSemanticError(line, col, f"unknown state {q!r}")
    names = list(states)
    index = {q: i for i, q in enumerate(names)}
    init_idx = tuple(dict.fromkeys(index[q] for q, _, _ in inits))
    vass = Vass(dim, tuple(names), init_idx,
                tuple(Transition(index[s], index[d], u, n) for n, s, d, u, _, _ in trans),
                domain or Domain.INTEGER)
    cost = CostFunction(tuple(costs[q][0] for q in names))
    spans = {f"state:{q}": pos for q, pos in states.items()}
    spans.update({f"trans:{n}": (line, cols["name"]) for n, _, _, _, line, cols in trans})
    return ModelDocument(vass, cost, spans)


def serialize_model(vass: Vass, cost: CostFunction, comment: Optional[str] = None) -> str:
    lines = [] if comment is None else [f"# {c}" for c in comment.splitlines()]
    lines.append(f"domain {vass.domain.value}")
    lines.append(f"dim {vass.dimension}")
    lines.extend(f"state {q}" for q in vass.states)
    lines.append("init " + " ".join(vass.states[i] for i in vass.initial))
    for t in vass.transitions:
        lines.append(" ".join(["trans", t.name, vass.states[t.source], vass.states[t.target],
                               *map(str, t.update)]))
    for q, row in zip(vass.states, cost.labels):
        lines.append(" ".join(["cost", q, *map(str, row)]))
    return "\n".join(lines) + "\n"


def parse_threshold(text: str) -> Fraction:
    """Integer or ``p/q``; anything else is a ValueError."""
    m = _RATIONAL.match(text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ValueError(f"threshold must be an integer or p/q, got {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def format_value(v) -> Optional[str]:
    if v is None:
        return None
    if isinstance(v, ExtendedValue):
        return str(v)
    return str(Fraction(v))


def answer_document(answer, vass: Vass, verified: bool) -> dict:
    w = answer.witness
    return {
        "answer": answer.verdict.value,
        "value": format_value(answer.value),
        "witness": None if w is None else {"prefix": vass.path_names(w.prefix),
                                           "cycle": vass.path_names(w.cycle)},
        "step": answer.step,
        "budget": dict(answer.budget),
        "verified": verified,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
