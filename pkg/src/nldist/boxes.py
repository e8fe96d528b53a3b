"""Bipartite boxes with binary inputs and d-valued outputs.

A box is stored as a probability table ``p[x, y, a, b] = P(ab|xy)`` of shape
``(2, 2, d, d)``. The four canonical boxes used throughout the package are

* ``nl``    -- nonlocal vertex, ``(b - a) mod d == x*y`` with weight ``1/d``
* ``lc``    -- local correlated box, ``a == b`` with weight ``1/d``
* ``ld``    -- local deterministic box, ``a == b == d - 1``
* ``mixed`` -- fully mixed box, uniform ``1/d**2``
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9
ORACLE_TOL = 1e-12

BASIS_NAMES = ("nl", "lc", "ld", "mixed")


@dataclass(frozen=True, eq=False)
class Box:
    """Immutable conditional probability table ``P(ab|xy)``.

    Entries that are negative by less than ``tol`` are clamped to zero.
    Construction does not enforce normalization or nonsignaling; use
    :func:`validate_nonsignaling` (or :meth:`checked`) for that.
    """

    d: int
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = int(self.d)
        if d < 2:
            raise ValueError(f"output dimension must be >= 2, got {self.d}")
        p = np.array(self.p, dtype=float)
        if p.shape != (2, 2, d, d):
            raise ValueError(f"expected table of shape {(2, 2, d, d)}, got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("probability table contains non-finite entries")
        p[(p < 0) & (p >= -DEFAULT_TOL)] = 0.0
        p.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "p", p)

    def checked(self, tol: float = DEFAULT_TOL) -> "Box":
        """Return ``self`` if it is a valid nonsignaling box, else raise."""
        report = validate_nonsignaling(self, tol)
        if not report.ok:
            raise ValueError(
                f"invalid box: {report.family} violation {report.worst:.3g} > {tol:g}"
            )
        return self

    def distance(self, other: "Box") -> float:
        """Max-norm distance between two tables of equal dimension."""
        _same_dim([self, other])
        return float(np.max(np.abs(self.p - other.p)))

    def __getitem__(self, idx):
        return self.p[idx]


def _check_dim(d) -> int:
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise ValueError(f"output dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _same_dim(boxes) -> int:
    dims = {b.d for b in boxes}
    if len(dims) != 1:
        raise ValueError(f"boxes have mismatched dimensions {sorted(dims)}")
    return dims.pop()


def _residue_table(d: int) -> np.ndarray:
    # r[a, b] = (b - a) mod d
    a = np.arange(d)
    return (a[None, :] - a[:, None]) % d


def make_nl_box(d: int) -> Box:
    d = _check_dim(d)
    r = _residue_table(d)
    p = np.zeros((2, 2, d, d))
    for x in range(2):
        for y in range(2):
            p[x, y] = (r == x * y) / d
    return Box(d, p)


def make_lc_box(d: int) -> Box:
    d = _check_dim(d)
    p = np.broadcast_to(np.eye(d) / d, (2, 2, d, d))
    return Box(d, p)


def make_ld_box(d: int) -> Box:
    d = _check_dim(d)
    p = np.zeros((2, 2, d, d))
    p[:, :, d - 1, d - 1] = 1.0
    return Box(d, p)


def make_mixed_box(d: int) -> Box:
    d = _check_dim(d)
    return Box(d, np.full((2, 2, d, d), 1.0 / d**2))


_MAKERS = {
    "nl": make_nl_box,
    "lc": make_lc_box,
    "ld": make_ld_box,
    "mixed": make_mixed_box,
}


def make_box(name: str, d: int) -> Box:
    """Canonical box by name: one of ``nl``, ``lc``, ``ld``, ``mixed``."""
    try:
        return _MAKERS[name.lower()](d)
    except KeyError:
        raise ValueError(f"unknown box family {name!r}; expected one of {BASIS_NAMES}") from None


def basis(d: int) -> tuple[Box, Box, Box, Box]:
    """The canonical basis ``(nl, lc, ld, mixed)`` at dimension ``d``."""
    return tuple(_MAKERS[n](d) for n in BASIS_NAMES)


def affine_combination(boxes, weights) -> Box:
    """Entrywise affine combination; weights may be negative.

    The caller is responsible for the result being a valid box. Only the
    weight sum is checked.
    """
    boxes = list(boxes)
    w = np.asarray(weights, dtype=float)
    if len(boxes) == 0 or len(boxes) != w.size:
        raise ValueError("need one weight per box")
    d = _same_dim(boxes)
    if abs(w.sum() - 1.0) > DEFAULT_TOL:
        raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
    p = np.tensordot(w, np.stack([b.p for b in boxes]), axes=1)
    return Box(d, p)


def mix(boxes, weights) -> Box:
    """Convex mixture ``sum_i w_i * box_i`` of boxes of equal dimension."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("mixture weights must be nonnegative")
    return affine_combination(boxes, w)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_nonsignaling`.

    ``deviations`` maps each constraint family to its worst violation;
    ``family`` names the family attaining ``worst``.
    """

    ok: bool
    worst: float
    family: str
    deviations: dict


def validate_nonsignaling(box: Box, tol: float = DEFAULT_TOL) -> ValidationReport:
    p = box.p
    dev = {}
    dev["normalization"] = float(np.max(np.abs(p.sum(axis=(2, 3)) - 1.0)))
    dev["nonnegativity"] = float(max(0.0, -p.min()))
    dev["upper_bound"] = float(max(0.0, p.max() - 1.0))
    # Bob's marginal P(b|xy) must not depend on x
    pb = p.sum(axis=2)
    dev["nonsignaling_a_to_b"] = float(np.max(np.abs(pb[0] - pb[1])))
    # Alice's marginal P(a|xy) must not depend on y
    pa = p.sum(axis=3)
    dev["nonsignaling_b_to_a"] = float(np.max(np.abs(pa[:, 0] - pa[:, 1])))
    family = max(dev, key=dev.get)
    worst = dev[family]
    return ValidationReport(ok=worst <= tol, worst=worst, family=family, deviations=dev)


@dataclass(frozen=True)
class AffineDecomposition:
    """Coefficients of a box over ``(nl, lc, ld, mixed)``."""

    c_nl: float
    c_lc: float
    c_ld: float
    c_mix: float
    residual: float

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.c_nl, self.c_lc, self.c_ld, self.c_mix])

    def exact(self, tol: float = 1e-10) -> bool:
        return self.residual <= tol

    def reconstruct(self, d: int) -> Box:
        return affine_combination(basis(d), self.coefficients)


def decompose_affine(box: Box) -> AffineDecomposition:
    """Least-squares affine fit of ``box`` over the canonical basis.

    Solves ``min ||B c - p||_2`` subject to ``sum(c) == 1`` through its KKT
    system. ``residual`` is the max-norm reconstruction error, so a residual
    at rounding level certifies that the box lies in the affine span.
    """
    B = np.stack([b.p.ravel() for b in basis(box.d)], axis=1)
    v = box.p.ravel()
    n = B.shape[1]
    kkt = np.zeros((n + 1, n + 1))
    kkt[:n, :n] = B.T @ B
    kkt[:n, n] = 1.0
    kkt[n, :n] = 1.0
    rhs = np.concatenate([B.T @ v, [1.0]])
    sol = np.linalg.solve(kkt, rhs)
    c = sol[:n]
    residual = float(np.max(np.abs(B @ c - v)))
    return AffineDecomposition(*map(float, c), residual=residual)
