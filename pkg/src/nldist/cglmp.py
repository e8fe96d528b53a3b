"""CGLMP correlators and inequality value.

For a box at dimension ``d`` the correlator for inputs ``(x, y)`` is

    E_xy = sum_{k=0}^{floor(d/2)-1} (1 - 2k/(d-1)) *
           [P((b-a) mod d == -k mod d | xy) - P((b-a) mod d == k+1 | xy)]

and the inequality value is ``E_00 + E_10 + E_01 - E_11``. Local boxes stay
at or below 2; the algebraic maximum is 4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boxes import Box

LOCAL_BOUND = 2.0
ALGEBRAIC_MAX = 4.0

# sign of each correlator in the inequality, indexed [x][y]
_SIGNS = np.array([[1.0, 1.0], [1.0, -1.0]])


@dataclass(frozen=True)
class CglmpReport:
    correlators: np.ndarray
    value: float

    @property
    def violates_local_bound(self) -> bool:
        return self.value > LOCAL_BOUND


def residue_weights(d: int) -> np.ndarray:
    """Weight attached to each residue ``r = (b - a) mod d`` in ``E_xy``."""
    w = np.zeros(d)
    for k in range(d // 2):
        c = 1.0 - 2.0 * k / (d - 1)
        w[(-k) % d] += c
        w[(k + 1) % d] -= c
    return w


def residue_distribution(box: Box) -> np.ndarray:
    """``q[x, y, r] = P((b - a) mod d == r | xy)``."""
    d = box.d
    a = np.arange(d)
    r = (a[None, :] - a[:, None]) % d
    q = np.zeros((2, 2, d))
    for res in range(d):
        q[:, :, res] = box.p[:, :, r == res].sum(axis=-1)
    return q


def correlator(box: Box, x: int, y: int) -> float:
    if x not in (0, 1) or y not in (0, 1):
        raise ValueError("inputs must be bits")
    q = residue_distribution(box)
    return float(q[x, y] @ residue_weights(box.d))


def cglmp_value(box: Box) -> CglmpReport:
    E = residue_distribution(box) @ residue_weights(box.d)
    return CglmpReport(correlators=E, value=float(np.sum(_SIGNS * E)))
