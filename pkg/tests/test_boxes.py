import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nldist.boxes import (
    Box,
    affine_combination,
    basis,
    decompose_affine,
    make_box,
    make_lc_box,
    make_ld_box,
    make_mixed_box,
    make_nl_box,
    mix,
    validate_nonsignaling,
)
from nldist.cglmp import cglmp_value
from nldist.wiring import comparator_wiring, wire

from . import oracles

dims = st.integers(min_value=2, max_value=9)


def test_nl_is_pr_box_at_d2():
    p = make_nl_box(2).p
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    assert p[x, y, a, b] == (0.5 if a ^ b == x & y else 0.0)


def test_nl_entries_d3():
    p = make_nl_box(3).p
    assert p[1, 1, 0, 1] == pytest.approx(1 / 3)
    assert p[1, 1, 0, 0] == 0.0


def test_lc_diagonal_d3():
    p = make_lc_box(3).p
    for x in range(2):
        for y in range(2):
            assert np.allclose(p[x, y], np.eye(3) / 3)


def test_ld_single_entry_d5():
    p = make_ld_box(5).p
    assert np.all(p[:, :, 4, 4] == 1.0)
    assert p.sum() == 4.0


@pytest.mark.parametrize("d,value", [(2, 0.25), (3, 1 / 9)])
def test_mixed_uniform(d, value):
    assert np.allclose(make_mixed_box(d).p, value)


@pytest.mark.parametrize("maker", [make_nl_box, make_lc_box, make_ld_box, make_mixed_box])
def test_constructors_reject_small_d(maker):
    with pytest.raises(ValueError):
        maker(1)


@pytest.mark.parametrize("name", ["nl", "lc", "ld", "mixed"])
@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_constructors_match_oracle_and_validate(name, d):
    box = make_box(name, d)
    assert np.array_equal(box.p, oracles.to_array(getattr(oracles, name)(d), d))
    assert validate_nonsignaling(box, 1e-12).ok


def test_box_is_immutable():
    box = make_nl_box(3)
    with pytest.raises(ValueError):
        box.p[0, 0, 0, 0] = 1.0


def test_small_negatives_clamped():
    p = make_lc_box(2).p.copy()
    p[0, 0, 0, 1] = -1e-13
    assert Box(2, p).p[0, 0, 0, 1] == 0.0


def test_box_shape_checked():
    with pytest.raises(ValueError):
        Box(3, np.zeros((2, 2, 2, 2)))


def test_mix_examples():
    nl, lc, ld, mixed = basis(4)
    assert mix([nl, lc], [1, 0]).distance(nl) == 0.0
    assert cglmp_value(mix([nl, lc], [0.3, 0.7])).value == pytest.approx(2.6, abs=1e-12)
    assert cglmp_value(mix([nl, ld, mixed], [0.5, 0.25, 0.25])).value == pytest.approx(2.5, abs=1e-12)


def test_mix_errors():
    with pytest.raises(ValueError):
        mix([make_nl_box(2), make_nl_box(3)], [0.5, 0.5])
    with pytest.raises(ValueError):
        mix([make_nl_box(2), make_lc_box(2)], [0.5, 0.6])
    with pytest.raises(ValueError):
        mix([make_nl_box(2), make_lc_box(2)], [1.5, -0.5])
    # the affine variant accepts negative weights
    affine_combination([make_nl_box(2), make_lc_box(2)], [1.5, -0.5])


def test_validate_flags_unnormalized():
    p = make_nl_box(3).p.copy()
    p[0, 0, 0, 0] += 0.1
    rep = validate_nonsignaling(Box(3, p))
    assert not rep.ok
    assert rep.deviations["normalization"] == pytest.approx(0.1)


def test_validate_flags_signaling():
    # Bob's output copies Alice's input
    p = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            p[x, y, 0, x] = 1.0
    rep = validate_nonsignaling(Box(2, p))
    assert not rep.ok
    assert rep.family == "nonsignaling_a_to_b"
    assert rep.worst == pytest.approx(1.0)
    # Alice's output copies Bob's input
    p = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            p[x, y, y, 0] = 1.0
    assert validate_nonsignaling(Box(2, p)).family == "nonsignaling_b_to_a"


def test_validate_flags_negative():
    p = make_lc_box(2).p.copy()
    p[0, 0, 0, 0] -= 0.7
    p[0, 0, 0, 1] += 0.7
    rep = validate_nonsignaling(Box(2, p))
    assert rep.deviations["nonnegativity"] == pytest.approx(0.2)
    assert not rep.ok


def test_checked_raises():
    p = make_nl_box(2).p.copy()
    p[0, 0, 0, 0] += 0.1
    with pytest.raises(ValueError, match="normalization"):
        Box(2, p).checked()


@pytest.mark.parametrize("d", [2, 3, 4, 5, 10])
def test_basis_affinely_independent(d):
    for i, box in enumerate(basis(d)):
        dec = decompose_affine(box)
        assert dec.residual <= 1e-12
        assert np.allclose(dec.coefficients, np.eye(4)[i], atol=1e-12)


def test_decompose_half_mixture():
    nl, lc, _, _ = basis(3)
    dec = decompose_affine(mix([nl, lc], [0.5, 0.5]))
    assert np.allclose(dec.coefficients, [0.5, 0.5, 0, 0], atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_decompose_quasi_mixture(d):
    dec = decompose_affine(wire(make_mixed_box(d), make_nl_box(d), comparator_wiring(d, 1)))
    assert dec.exact()
    assert dec.c_nl == pytest.approx(1 / d**2, abs=1e-12)
    assert dec.c_lc == pytest.approx(-1 / d**2, abs=1e-12)
    assert dec.c_ld == pytest.approx(0.0, abs=1e-12)
    assert dec.c_mix == pytest.approx(1.0, abs=1e-12)


def test_decompose_reports_residual_outside_span():
    p = np.zeros((2, 2, 3, 3))
    p[:, :, 0, 0] = 1.0  # deterministic box at (0, 0) is not in the span
    dec = decompose_affine(Box(3, p))
    assert dec.residual > 0.1
    assert sum(dec.coefficients) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(d=dims, w=st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3))
def test_decompose_recovers_affine_weights(d, w):
    weights = np.array([*w, 1 - sum(w)])
    dec = decompose_affine(affine_combination(basis(d), weights))
    assert np.allclose(dec.coefficients, weights, atol=1e-10)
    assert dec.residual <= 1e-10


@settings(max_examples=60, deadline=None)
@given(d=dims, raw=st.lists(st.floats(0, 1, allow_nan=False), min_size=4, max_size=4).filter(lambda r: sum(r) > 1e-3))
def test_mixtures_stay_valid_and_bounded(d, raw):
    w = np.array(raw) / sum(raw)
    box = mix(basis(d), w)
    assert validate_nonsignaling(box, 1e-12).ok
    assert box.p.min() >= -1e-12 and box.p.max() <= 1 + 1e-12
