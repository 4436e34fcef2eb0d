import random

import pytest
from hypothesis import given, strategies as st

from zarkit import CurveConfiguration
from zarkit.errors import InputError
from zarkit.pullback import (
    BirationalModel,
    BlowupPoint,
    blowup_chain_builder,
    cluster_cycle,
    compose,
    random_blowup,
)
from zarkit.surface_model import round_up
from zarkit.zariski import int_zariski_decompose, is_z_positive, zariski_decompose


@pytest.fixture
def plane():
    return CurveConfiguration.build(["H"], [[1]], exceptional=[], canonical=[-3])


@pytest.mark.parametrize("basis", ["total", "prime"])
def test_builder_projection_formula(plane, basis):
    model = blowup_chain_builder(plane, [BlowupPoint("H", 3, 2)], basis=basis)
    h = model.pullback(plane.curve("H"))
    assert h.square() == 1
    assert all(h.dot_curve(j) == 0 for j in model.exceptional_set)
    assert model.pushforward(h) == plane.curve("H")
    assert model.source.gram[0, 0] == 1 - 2


def test_builder_total_basis_entries(plane):
    model = blowup_chain_builder(plane, [BlowupPoint("H", 2, 1), BlowupPoint("H", 1, 3)])
    src = model.source
    assert src.curves == ("H", "E1.1", "E1.2", "E2.1")
    assert [src.gram[i, i] for i in range(4)] == [1 - 1 - 3, -1, -1, -3]
    assert src.gram[0, 1] == 1 and src.gram[0, 2] == 0 and src.gram[0, 3] == 3
    assert cluster_cycle(model) == src.divisor({"E1.1": 1, "E1.2": 1, "E2.1": 1})


def test_builder_prime_basis_is_a_chain(plane):
    model = blowup_chain_builder(plane, [BlowupPoint("H", 3)], basis="prime")
    g = model.source.gram
    assert [g[i, i] for i in range(1, 4)] == [-2, -2, -1]
    assert g[1, 2] == g[2, 3] == 1 and g[1, 3] == 0
    assert model.anticanonical == model.source.divisor({"F1.1": -1, "F1.2": -2, "F1.3": -3})


@pytest.mark.parametrize("basis", ["total", "prime"])
def test_builder_canonical_satisfies_adjunction(plane, basis):
    model = blowup_chain_builder(plane, [BlowupPoint("H", 3)], basis=basis)
    src = model.source
    # every curve here is rational: K.C + C^2 = -2 (H is a line on the plane)
    for i in range(src.n):
        if basis == "total" and 1 <= i < src.n - 1:
            continue  # total transforms E^k (k < m) are reducible
        assert src.canonical[i] + src.gram[i, i] == -2
    # K' = pi^*K - Delta
    k_target = plane.canonical_divisor()
    assert model.pullback(k_target) - model.anticanonical == src.canonical_divisor()


def test_both_bases_give_same_delta(plane):
    for m in (1, 2, 3):
        t = blowup_chain_builder(plane, [BlowupPoint("H", m)], basis="total")
        p = blowup_chain_builder(plane, [BlowupPoint("H", m)], basis="prime")
        assert t.anticanonical.square() == p.anticanonical.square() == -m


def test_model_validation(plane):
    src = CurveConfiguration.build(["H", "E"], [[0, 1], [1, -1]], exceptional=["E"])
    BirationalModel(src, plane, (0,))
    with pytest.raises(InputError):
        BirationalModel(src, plane, (0, 1))
    bad = CurveConfiguration.build(["H", "E"], [[0, 1], [1, -1]], exceptional=[])
    with pytest.raises(InputError):
        BirationalModel(bad, plane, (0,))
    wrong = CurveConfiguration.build(["H", "E"], [[0, 2], [2, -1]], exceptional=["E"])
    with pytest.raises(InputError):
        BirationalModel(wrong, plane, (0,))


def test_compose(plane):
    inner = blowup_chain_builder(plane, [BlowupPoint("H", 1)])
    outer = blowup_chain_builder(inner.source, [BlowupPoint("E1.1", 1)], prefix="G")
    both = compose(outer, inner)
    assert both.target == plane and both.source == outer.source
    assert both.pullback(plane.curve("H")).square() == 1
    assert both.anticanonical == outer.pullback(inner.anticanonical) + outer.anticanonical


@given(st.integers(0, 10_000))
def test_round_up_of_pullback_is_z_positive(seed):
    rng = random.Random(seed)
    target = CurveConfiguration.build(["H", "C"], [[1, 1], [1, -2]], exceptional=["C"])
    model = random_blowup(rng, target)
    d = target.divisor([rng.randint(0, 4), rng.randint(0, 4)])
    pz = int_zariski_decompose(d).positive
    pulled = model.pullback(pz)
    assert is_z_positive(round_up(pulled), assume_pseudo_effective=True).positive
    cl = zariski_decompose(d)
    lifted = zariski_decompose(model.pullback(d))
    assert lifted.positive == model.pullback(cl.positive)
