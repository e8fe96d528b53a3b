"""Parameter sweeps over the closed-form update rules.

``d`` may be ``math.inf`` throughout; the limit is taken symbolically (the
``1/d`` terms are dropped), never approximated by a large finite dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distillation import Family, NoisyParams, Protocol, noisy_final_cglmp, predict_epsilon

INF = math.inf
# nonzero margins on the lattices used here are far above this
REGION_TOL = 1e-12


@dataclass(frozen=True)
class SweepGrid:
    """Dimensions and an epsilon lattice for efficiency curves."""

    dims: tuple = (2, 3, 5, 10, 50)
    epsilons: tuple = field(default_factory=lambda: tuple(np.linspace(0.0, 1.0, 101)))
    protocols: tuple = (Protocol.A, Protocol.B)

    def __post_init__(self):
        for d in self.dims:
            if not (math.isinf(d) or (int(d) == d and d >= 2)):
                raise ValueError(f"bad dimension {d!r}")
        if any(not 0.0 <= e <= 1.0 for e in self.epsilons):
            raise ValueError("epsilons must lie in [0, 1]")
        object.__setattr__(self, "protocols", tuple(Protocol(p) for p in self.protocols))

    @classmethod
    def uniform(cls, dims, steps: int, protocols=(Protocol.A, Protocol.B)) -> "SweepGrid":
        eps = tuple(i / steps for i in range(steps + 1))
        return cls(tuple(dims), eps, tuple(protocols))


@dataclass(frozen=True)
class EfficiencyRow:
    protocol: Protocol
    d: float
    epsilon: float
    cglmp_initial: float
    cglmp_final: float


def efficiency_curve(grid: SweepGrid) -> list[EfficiencyRow]:
    """Initial versus final CGLMP value along each protocol's mixture family."""
    rows = []
    for protocol in grid.protocols:
        for d in sorted(grid.dims):
            for eps in sorted(grid.epsilons):
                final = predict_epsilon(protocol, eps, d)
                rows.append(EfficiencyRow(protocol, d, eps, 2 + 2 * eps, 2 + 2 * final))
    return rows


@dataclass(frozen=True)
class RegionPoint:
    xi: float
    gamma: float
    d: float
    cglmp_initial: float
    cglmp_final: float
    margin: float
    works: bool


def works_region(xi: float, gamma: float, d, tol: float = REGION_TOL) -> RegionPoint:
    """Whether protocol B strictly improves ``xi*nl + gamma*ld + mu*mixed``.

    Points on the boundary curve (margin within ``tol`` of zero) count as
    not working.
    """
    params = NoisyParams(xi, gamma, Family.LD, d)
    initial = 4 * xi + 2 * gamma
    final = noisy_final_cglmp(params)
    margin = final - initial
    return RegionPoint(xi, gamma, d, initial, final, margin, margin > tol)


def simplex_lattice(n: int):
    """Points ``(i/n, j/n)`` with ``i + j <= n``, in row-major order."""
    for i in range(n + 1):
        for j in range(n + 1 - i):
            yield i / n, j / n


def region_map(n: int, d):
    """Lazily classify every lattice point of the ``(xi, gamma)`` simplex."""
    for xi, g in simplex_lattice(n):
        yield works_region(xi, g, d)


@dataclass(frozen=True)
class FixedPoints:
    values: tuple
    all_fixed: bool = False


def fixed_points(protocol: Protocol, d) -> FixedPoints:
    """Solutions of ``eps' == eps`` within ``[0, 1]``.

    For protocol A in the infinite-dimension limit the update is the
    identity, reported as ``all_fixed``.
    """
    protocol = Protocol(protocol)
    if protocol is Protocol.A:
        if math.isinf(d):
            return FixedPoints((), all_fixed=True)
        # eps' - eps = eps/d - eps**2/d
        coeffs = [-1.0 / d, 1.0 / d, 0.0]
    else:
        # eps' - eps = eps - eps**2
        coeffs = [-1.0, 1.0, 0.0]
    roots = np.roots(coeffs)
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12 and -1e-12 <= r.real <= 1 + 1e-12)
    return FixedPoints(tuple(min(1.0, max(0.0, r)) for r in real))
