"""Random nonsignaling boxes and random deterministic wirings."""
from __future__ import annotations

import numpy as np

from .boxes import Box
from .wiring import WiringSpec


def _relabel(p: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # input-dependent output permutations are local, so they preserve nonsignaling
    d = p.shape[-1]
    out = np.empty_like(p)
    pa = [rng.permutation(d) for _ in range(2)]
    pb = [rng.permutation(d) for _ in range(2)]
    for x in range(2):
        for y in range(2):
            out[x, y][np.ix_(pa[x], pb[y])] = p[x, y]
    return out


def _shift_box(d: int, rng) -> np.ndarray:
    # (1/d) [ (b - a) mod d == c[x, y] ]: uniform marginals for any c
    c = rng.integers(0, d, size=(2, 2))
    a = np.arange(d)
    r = (a[None, :] - a[:, None]) % d
    return np.stack([[(r == c[x, y]) / d for y in range(2)] for x in range(2)])


def _deterministic_box(d: int, rng) -> np.ndarray:
    alpha = rng.integers(0, d, size=2)
    beta = rng.integers(0, d, size=2)
    p = np.zeros((2, 2, d, d))
    for x in range(2):
        for y in range(2):
            p[x, y, alpha[x], beta[y]] = 1.0
    return p


def _product_box(d: int, rng) -> np.ndarray:
    ma = rng.dirichlet(np.ones(d), size=2)
    mb = rng.dirichlet(np.ones(d), size=2)
    return ma[:, None, :, None] * mb[None, :, None, :]


_COMPONENTS = (_shift_box, _deterministic_box, _product_box)


def random_nonsignaling_box(d: int, rng: np.random.Generator, n_components: int = 4) -> Box:
    """Random convex mixture of relabeled nonsignaling components.

    Components are shift boxes (the nonlocal vertex and its relatives),
    local deterministic boxes and product boxes.
    """
    parts = []
    for _ in range(n_components):
        make = _COMPONENTS[rng.integers(len(_COMPONENTS))]
        parts.append(_relabel(make(d, rng), rng))
    w = rng.dirichlet(np.ones(n_components))
    return Box(d, np.tensordot(w, np.stack(parts), axes=1))


def random_wiring(d: int, rng: np.random.Generator) -> WiringSpec:
    return WiringSpec(
        d,
        rng.integers(0, 2, size=(2, d)),
        rng.integers(0, 2, size=(2, d)),
        rng.integers(0, d, size=(d, d)),
        rng.integers(0, d, size=(d, d)),
    )
