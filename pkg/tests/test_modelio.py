from fractions import Fraction
from importlib import resources

import pytest

from limavg.generators import random_vass, running_example
from limavg.model import Domain
from limavg.modelio import (ModelSemanticError, ModelSyntaxError, parse_model, parse_threshold,
                            serialize_model)

HEADER = "dim 2\nstate A\nstate B\ninit B\n"


def fixture(name):
    return resources.files("limavg").joinpath("data", name).read_text(encoding="utf-8")


def test_fixture():
    doc = parse_model(fixture("ae.vass"))
    vass, cost = running_example()
    assert (doc.vass, doc.cost) == (vass, cost)
    assert doc.spans["trans:e1"] == (8, 7)


def _err(text):
    with pytest.raises((ModelSyntaxError, ModelSemanticError)) as info:
        parse_model(text)
    return info.value


def test_negative_coefficient():
    e = _err(HEADER + "cost A -1 0\ncost B 0 0\n")
    assert isinstance(e, ModelSemanticError) and e.message == "negative coefficient"
    assert (e.line, e.column) == (5, 8)


def test_unknown_state():
    e = _err(HEADER + "trans e1 B X 1 0\ncost A 0 0\ncost B 0 0\n")
    assert isinstance(e, ModelSemanticError) and "unknown state" in e.message
    assert (e.line, e.column) == (5, 12)
    assert str(e).startswith("line 5, column 12: semantic error")


@pytest.mark.parametrize("text,kind", [
    ("dimension 2\n", ModelSyntaxError),
    ("dim two\n", ModelSyntaxError),
    ("domain Q\ndim 1\n", ModelSyntaxError),
    (HEADER + "trans e1 A B 1 x\n", ModelSyntaxError),
    (HEADER + "trans e1 A B 1\ncost A 0 0\ncost B 0 0\n", ModelSemanticError),
    (HEADER + "cost A 0 0\n", ModelSemanticError),
    ("state A\ninit A\ncost A 1\n", ModelSemanticError),
    ("dim 1\nstate A\ncost A 1\n", ModelSemanticError),
    (HEADER + "cost A 0 0\ncost A 0 0\ncost B 0 0\n", ModelSemanticError),
    (HEADER + "trans t A B 0 0\ntrans t B A 0 0\ncost A 0 0\ncost B 0 0\n",
     ModelSemanticError),
])
def test_errors(text, kind):
    assert isinstance(_err(text), kind)


def test_comments_and_defaults():
    doc = parse_model("# hi\ndim 1  # one counter\ncost q 3\ninit q\ntrans t q q -1\n")
    assert doc.vass.domain is Domain.INTEGER and doc.vass.states == ("q",)
    assert doc.cost.labels == ((3,),)


def test_round_trip():
    for seed in range(100):
        dom = Domain.NATURAL if seed % 3 == 0 else Domain.INTEGER
        vass, cost = random_vass(1 + seed % 4, 2 + seed % 6, 1 + seed % 3, (-3, 3), (0, 4),
                                 seed, dom)
        text = serialize_model(vass, cost, f"seed {seed}")
        doc = parse_model(text)
        assert (doc.vass, doc.cost) == (vass, cost)
        assert serialize_model(doc.vass, doc.cost, f"seed {seed}") == text


def test_threshold():
    assert parse_threshold("3") == 3
    assert parse_threshold("-6/4") == Fraction(-3, 2)
    assert parse_threshold(" 1 / 3 ") == Fraction(1, 3)
    for bad in ("", "1/0", "0.5", "a", "1/-2"):
        with pytest.raises(ValueError):
            parse_threshold(bad)
