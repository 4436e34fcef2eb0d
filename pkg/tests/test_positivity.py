import random

import pytest

from zarkit import CurveConfiguration
from zarkit.errors import CapExceededError, InputError, PreconditionError, UndecidableError
from zarkit.exact_linalg import signature
from zarkit.positivity import (
    absolute_view,
    chain_connected_by_chains,
    connectedness,
    implication_audit,
    is_big,
    random_audit_instance,
    reflection,
)


def test_bigness_modes(he):
    assert is_big(he.curve("H"))
    assert not is_big(he.curve("E"))
    assert is_big(he.curve("E"), "birational")
    fibred = CurveConfiguration.build(["C0", "F"], [[-1, 1], [1, 0]], exceptional=[0], fiber_class=[0, 1])
    assert is_big(fibred.curve("C0"), "relative")
    assert not is_big(fibred.curve("F"), "relative")
    with pytest.raises(UndecidableError):
        is_big(he.curve("H"), "relative")


def test_bigness_of_non_effective_class(he):
    assert is_big(he.divisor({"H": 3, "E": -1}))
    assert not is_big(he.divisor({"H": -3, "E": 1}))
    with pytest.raises(UndecidableError):
        is_big(he.divisor({"E": -1}))
    with pytest.raises(InputError):
        is_big(he.divisor({"H": 3, "E": -1}), nef_class=he.curve("E"))


def test_reflection(he):
    d = he.divisor({"H": 1, "E": 1})
    r = reflection(d)
    assert r == he.curve("H")  # P - N = (H + E/2) - E/2
    assert r.square() == d.square() and is_big(r)
    with pytest.raises(PreconditionError):
        reflection(he.curve("E"))


def test_i2_fibre_is_z_positive_but_not_chain_connected(i2):
    d = i2.divisor({"C1": 2, "C2": 2})
    v = connectedness(d)
    assert not v.chain_connected and not v.numerically_connected
    w = v.chain_witness
    assert w.first + w.second == d
    assert all(w.first.dot_curve(i) <= 0 for i in w.second.support)
    assert not chain_connected_by_chains(d)
    report = implication_audit(d)
    assert report.z_positive and report.implications_hold and report.algorithms_agree


def test_reduced_i2_fibre_is_numerically_connected(i2):
    v = connectedness(i2.divisor({"C1": 1, "C2": 1}))
    assert v.numerically_connected and v.chain_connected


def test_connectedness_inputs(he, i2):
    with pytest.raises(PreconditionError):
        connectedness(he.divisor({"H": "1/2"}))
    with pytest.raises(PreconditionError):
        connectedness(he.zero())
    with pytest.raises(CapExceededError):
        connectedness(i2.divisor({"C1": 50, "C2": 50}), cap=100)


def test_audit_needs_non_negative_definite_support(he):
    with pytest.raises(PreconditionError):
        implication_audit(he.curve("E") * 2)


def test_random_audit_instances_are_hodge_realisable():
    rng = random.Random(7)
    for _ in range(50):
        d = random_audit_instance(rng)
        assert d is not None
        n_plus, n_zero, _ = signature(d.config.gram)
        assert n_plus == 0 or (n_plus == 1 and n_zero == 0)
        report = implication_audit(d)
        assert report.implications_hold and report.algorithms_agree


def test_absolute_view(he):
    assert absolute_view(he).is_absolute and not he.is_absolute
