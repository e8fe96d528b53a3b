import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nldist.boxes import basis, decompose_affine, make_box, mix, validate_nonsignaling
from nldist.sampling import random_nonsignaling_box, random_wiring
from nldist.wiring import WiringSpec, comparator, comparator_wiring, named_wiring, wire

from . import oracles


@pytest.mark.parametrize("d", [2, 3, 7])
def test_comparator(d):
    assert comparator(d - 1, d) == 1
    assert comparator(0, d) == 0
    if d >= 3:
        assert comparator(d - 2, d) == 0


def test_comparator_range():
    with pytest.raises(ValueError):
        comparator(3, 3)
    with pytest.raises(ValueError):
        comparator(-1, 3)


def test_comparator_wiring_d2_is_and_xor():
    spec = comparator_wiring(2, 0)
    for x in range(2):
        for a1 in range(2):
            assert spec.fa[x, a1] == (x & a1)
            for a2 in range(2):
                assert spec.ga[a1, a2] == a1 ^ a2


def test_comparator_wiring_tables():
    assert comparator_wiring(3, 1).ga[2, 2] == 2
    spec = comparator_wiring(5, 0)
    assert spec.fa[1, 4] == 1 and spec.fa[1, 3] == 0
    assert np.all(spec.fa[0] == 0)
    assert spec == comparator_wiring(5, 0)
    assert spec != comparator_wiring(5, 1)
    with pytest.raises(ValueError):
        comparator_wiring(3, 3)


def test_named_wiring():
    assert named_wiring("comparator-B", 4) == comparator_wiring(4, 1)
    with pytest.raises(ValueError):
        named_wiring("depth-3", 4)


def test_wiring_spec_validates_tables():
    d = 3
    good = dict(fa=np.zeros((2, d)), fb=np.zeros((2, d)), ga=np.zeros((d, d)), gb=np.zeros((d, d)))
    WiringSpec(d, **good)
    with pytest.raises(ValueError):
        WiringSpec(d, **{**good, "fa": np.full((2, d), 2)})
    with pytest.raises(ValueError):
        WiringSpec(d, **{**good, "gb": np.full((d, d), d)})
    with pytest.raises(ValueError):
        WiringSpec(d, **{**good, "ga": np.zeros((d, d + 1))})


def test_wire_dimension_mismatch():
    with pytest.raises(ValueError):
        wire(make_box("nl", 2), make_box("nl", 3), comparator_wiring(2))
    with pytest.raises(ValueError):
        wire(make_box("nl", 3), make_box("nl", 3), comparator_wiring(2))


@pytest.mark.parametrize("offset", [0, 1])
@pytest.mark.parametrize("first,second", [("nl", "nl"), ("lc", "nl"), ("mixed", "nl"), ("ld", "lc"), ("nl", "mixed")])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_wire_matches_exact_loop_oracle(d, first, second, offset):
    t1, t2 = getattr(oracles, first)(d), getattr(oracles, second)(d)
    exact = oracles.comparator_wire(t1, t2, d, offset)
    got = wire(make_box(first, d), make_box(second, d), comparator_wiring(d, offset))
    assert np.max(np.abs(got.p - oracles.to_array(exact, d))) <= 1e-15


@pytest.mark.parametrize("d", [2, 3, 5])
def test_random_wirings_match_loop_oracle(d):
    rng = np.random.default_rng(11 + d)
    for _ in range(10):
        b1, b2 = random_nonsignaling_box(d, rng), random_nonsignaling_box(d, rng)
        spec = random_wiring(d, rng)
        ref = oracles.generic_wire(b1.p.tolist(), b2.p.tolist(), d,
                                   spec.fa.tolist(), spec.fb.tolist(), spec.ga.tolist(), spec.gb.tolist())
        assert np.max(np.abs(wire(b1, b2, spec).p - np.array(ref))) <= 1e-14


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_comparator_case_examples(d):
    nl, lc, ld, _ = basis(d)
    A, B = comparator_wiring(d, 0), comparator_wiring(d, 1)
    assert wire(nl, nl, A).distance(nl) <= 1e-12
    assert wire(lc, nl, A).distance(mix([nl, lc], [1 / d, 1 - 1 / d])) <= 1e-12
    assert wire(ld, nl, B).distance(nl) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(d=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_wiring_preserves_nonsignaling(d, seed):
    rng = np.random.default_rng(seed)
    out = wire(random_nonsignaling_box(d, rng), random_nonsignaling_box(d, rng), random_wiring(d, rng))
    rep = validate_nonsignaling(out, 1e-9)
    assert rep.ok
    assert rep.deviations["normalization"] <= 1e-12


@settings(max_examples=50, deadline=None)
@given(d=st.integers(2, 5), seed=st.integers(0, 2**32 - 1), w=st.floats(0, 1))
def test_bilinearity(d, seed, w):
    rng = np.random.default_rng(seed)
    P, Q, R = (random_nonsignaling_box(d, rng) for _ in range(3))
    spec = random_wiring(d, rng)
    first = wire(mix([P, Q], [w, 1 - w]), R, spec).p
    assert np.allclose(first, w * wire(P, R, spec).p + (1 - w) * wire(Q, R, spec).p, atol=1e-12, rtol=0)
    second = wire(R, mix([P, Q], [w, 1 - w]), spec).p
    assert np.allclose(second, w * wire(R, P, spec).p + (1 - w) * wire(R, Q, spec).p, atol=1e-12, rtol=0)


def test_composed_box_decomposes_exactly_when_in_span():
    d = 4
    dec = decompose_affine(wire(*basis(d)[:2], comparator_wiring(d, 0)))
    assert dec.exact(1e-12)
