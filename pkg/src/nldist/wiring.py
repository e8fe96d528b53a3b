"""Deterministic depth-2 wirings of two boxes.

Each party feeds its global input into the first box, computes the second
box's input from the global input and the first box's output, and combines
both outputs into the global output::

    x1 = x,  x2 = fa[x, a1],  a = ga[a1, a2]
    y1 = y,  y2 = fb[y, b1],  b = gb[b1, b2]

Alice's tables never see Bob's variables and vice versa, so locality holds
by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boxes import Box, _check_dim, _same_dim


@dataclass(frozen=True, eq=False)
class WiringSpec:
    """Lookup tables ``fa, fb`` of shape ``(2, d)`` and ``ga, gb`` of shape ``(d, d)``."""

    d: int
    fa: np.ndarray
    fb: np.ndarray
    ga: np.ndarray
    gb: np.ndarray

    def __post_init__(self):
        d = _check_dim(self.d)
        object.__setattr__(self, "d", d)
        for name, shape, hi in (("fa", (2, d), 2), ("fb", (2, d), 2),
                                ("ga", (d, d), d), ("gb", (d, d), d)):
            t = np.asarray(getattr(self, name))
            if t.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {t.shape}")
            if not np.all(t == np.round(t)):
                raise ValueError(f"{name} must hold integers")
            t = t.astype(np.int64)
            if t.min() < 0 or t.max() >= hi:
                raise ValueError(f"{name} entries must lie in [0, {hi - 1}]")
            t.setflags(write=False)
            object.__setattr__(self, name, t)

    def __eq__(self, other):
        if not isinstance(other, WiringSpec):
            return NotImplemented
        return self.d == other.d and all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in ("fa", "fb", "ga", "gb")
        )


def comparator(k: int, d: int) -> int:
    """1 if ``k == d - 1`` else 0."""
    if not 0 <= k <= d - 1:
        raise ValueError(f"symbol {k} outside [0, {d - 1}]")
    return int(k == d - 1)


def comparator_wiring(d: int, offset: int = 0) -> WiringSpec:
    """Comparator-gated wiring; ``offset=0`` is protocol A, ``offset=1`` protocol B.

    The second box receives ``comparator(a1) * x`` and the global output is
    ``(a1 + a2 + offset) mod d``; Bob's side is identical.
    """
    d = _check_dim(d)
    if not 0 <= offset <= d - 1:
        raise ValueError(f"offset {offset} outside [0, {d - 1}]")
    f = np.array([[comparator(k, d) * x for k in range(d)] for x in range(2)])
    s = np.arange(d)
    g = (s[:, None] + s[None, :] + offset) % d
    return WiringSpec(d, f, f.copy(), g, g.copy())


WIRINGS = {"comparator-A": 0, "comparator-B": 1}


def named_wiring(name: str, d: int) -> WiringSpec:
    try:
        return comparator_wiring(d, WIRINGS[name])
    except KeyError:
        raise ValueError(f"unknown wiring {name!r}; expected one of {sorted(WIRINGS)}") from None


def wire(box1: Box, box2: Box, spec: WiringSpec) -> Box:
    """Exact composed box.

    Computes ``P(ab|xy) = sum over a1,b1,a2,b2 of [a == ga(a1,a2)] [b == gb(b1,b2)]
    P1(a1 b1|x y) P2(a2 b2|fa(x,a1) fb(y,b1))`` by scattering all ``4 d**4``
    joint terms into the output table.
    """
    d = _same_dim([box1, box2])
    if spec.d != d:
        raise ValueError(f"wiring dimension {spec.d} does not match boxes ({d})")
    # second-box table seen at each (x, y, a1, b1): shape (2, 2, d, d, d, d)
    second = box2.p[spec.fa[:, None, :, None], spec.fb[None, :, None, :]]
    joint = box1.p[..., None, None] * second

    X = np.arange(2)[:, None, None, None, None, None]
    Y = np.arange(2)[None, :, None, None, None, None]
    A = spec.ga[None, None, :, None, :, None]
    B = spec.gb[None, None, None, :, None, :]
    out = np.zeros((2, 2, d, d))
    np.add.at(out, (X, Y, A, B), joint)
    return Box(d, out)
