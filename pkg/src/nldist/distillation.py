"""Comparator distillation protocols and their closed-form update rules.

Protocol A wires two copies of ``eps*nl + (1-eps)*lc`` with the offset-0
comparator wiring; protocol B wires two copies of ``eps*nl + (1-eps)*ld``
with the offset-1 wiring. Every closed form here is checked against the
brute-force composition in :func:`nldist.wiring.wire`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .boxes import (
    AffineDecomposition,
    Box,
    basis,
    decompose_affine,
    make_box,
    mix,
)
from .cglmp import cglmp_value
from .wiring import comparator_wiring, wire

DECOMPOSITION_TOL = 1e-10


class Family(str, enum.Enum):
    LC = "lc"
    LD = "ld"


class Protocol(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def offset(self) -> int:
        return 0 if self is Protocol.A else 1

    @property
    def family(self) -> Family:
        """Local component the protocol is designed for."""
        return Family.LC if self is Protocol.A else Family.LD


def _inv(d) -> float:
    return 0.0 if math.isinf(d) else 1.0 / d


@dataclass(frozen=True)
class MixtureParams:
    epsilon: float
    family: Family
    d: int

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        object.__setattr__(self, "family", Family(self.family))


@dataclass(frozen=True)
class NoisyParams:
    """Weights of ``xi*nl + gamma*local + mu*mixed`` with ``mu = 1 - xi - gamma``."""

    xi: float
    gamma: float
    local_family: Family
    d: int

    def __post_init__(self):
        if self.xi < 0 or self.gamma < 0 or self.xi + self.gamma > 1 + 1e-12:
            raise ValueError(f"need xi, gamma >= 0 and xi + gamma <= 1, got ({self.xi}, {self.gamma})")
        object.__setattr__(self, "local_family", Family(self.local_family))

    @property
    def mu(self) -> float:
        return max(0.0, 1.0 - self.xi - self.gamma)


@dataclass(frozen=True)
class DistillationResult:
    """Outcome of one protocol round.

    ``closed_form_prediction`` is the predicted final CGLMP value (``None``
    when the input has no closed form under the protocol). ``oracle_residual``
    is the max-norm gap between the brute-force box and the predicted box, or
    the absolute CGLMP gap when only a value is predicted.
    """

    final_box: Box
    initial_cglmp: float
    final_cglmp: float
    closed_form_prediction: float | None
    oracle_residual: float | None
    input_epsilon: float | None = None
    predicted_epsilon: float | None = None
    final_decomposition: AffineDecomposition | None = None


def build_mixture(params: MixtureParams) -> Box:
    nl = make_box("nl", params.d)
    local = make_box(params.family.value, params.d)
    return mix([nl, local], [params.epsilon, 1.0 - params.epsilon])


def predict_epsilon_a(epsilon: float, d) -> float:
    """Nonlocal weight after protocol A: ``(1 + 1/d) eps - eps**2 / d``."""
    inv = _inv(d)
    return (1.0 + inv) * epsilon - inv * epsilon**2


def predict_epsilon_b(epsilon: float) -> float:
    """Nonlocal weight after protocol B: ``2 eps - eps**2``."""
    return 2.0 * epsilon - epsilon**2


def predict_epsilon(protocol: Protocol, epsilon: float, d) -> float:
    if Protocol(protocol) is Protocol.A:
        return predict_epsilon_a(epsilon, d)
    return predict_epsilon_b(epsilon)


def family_weight(box: Box, family: Family, tol: float = DECOMPOSITION_TOL) -> float | None:
    """Nonlocal weight of ``box`` if it is exactly ``eps*nl + (1-eps)*family``."""
    dec = decompose_affine(box)
    other = dec.c_ld if Family(family) is Family.LC else dec.c_lc
    if not dec.exact(tol) or abs(other) > tol or abs(dec.c_mix) > tol:
        return None
    eps = dec.c_nl
    if eps < -tol or eps > 1 + tol:
        return None
    return min(1.0, max(0.0, eps))


def distill_once(box: Box, protocol: Protocol, tol: float = DECOMPOSITION_TOL) -> DistillationResult:
    protocol = Protocol(protocol)
    final = wire(box, box, comparator_wiring(box.d, protocol.offset))
    result = dict(
        final_box=final,
        initial_cglmp=cglmp_value(box).value,
        final_cglmp=cglmp_value(final).value,
        closed_form_prediction=None,
        oracle_residual=None,
        final_decomposition=decompose_affine(final),
    )
    eps = family_weight(box, protocol.family, tol)
    if eps is not None:
        eps_f = predict_epsilon(protocol, eps, box.d)
        predicted = build_mixture(MixtureParams(eps_f, protocol.family, box.d))
        result.update(
            closed_form_prediction=2.0 + 2.0 * eps_f,
            oracle_residual=final.distance(predicted),
            input_epsilon=eps,
            predicted_epsilon=eps_f,
        )
    return DistillationResult(**result)


@dataclass(frozen=True)
class TrajectoryPoint:
    round: int
    epsilon: float | None
    cglmp: float
    copies: int
    oracle_residual: float | None


def distill_iterate(params: MixtureParams, protocol: Protocol, rounds: int) -> list[TrajectoryPoint]:
    """Repeated self-composition of the box, ``2**n`` initial copies at round ``n``.

    ``epsilon`` follows the closed-form update; each round the brute-force
    composed box is compared with the closed-form mixture. When the family
    does not match the protocol no closed form exists, ``epsilon`` is
    ``None`` and ``cglmp`` comes from the brute-force box alone.

    A fully mixed admixture ``mu`` roughly doubles each round, so rounding
    noise in the brute-force box grows like ``2**n * 1e-16``; long protocol A
    runs at larger ``d`` show residuals well above machine precision.
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    protocol = Protocol(protocol)
    matched = params.family is protocol.family
    spec = comparator_wiring(params.d, protocol.offset)
    box = build_mixture(params)
    eps = params.epsilon if matched else None
    traj = [TrajectoryPoint(0, eps, cglmp_value(box).value, 1, 0.0 if matched else None)]
    for n in range(1, rounds + 1):
        box = wire(box, box, spec)
        residual = None
        if matched:
            eps = predict_epsilon(protocol, eps, params.d)
            residual = box.distance(build_mixture(MixtureParams(eps, params.family, params.d)))
            value = 2.0 + 2.0 * eps
        else:
            value = cglmp_value(box).value
        traj.append(TrajectoryPoint(n, eps, value, 2**n, residual))
    return traj


def build_noisy(params: NoisyParams) -> Box:
    nl, _, _, mixed = basis(params.d)
    local = make_box(params.local_family.value, params.d)
    return mix([nl, local, mixed], [params.xi, params.gamma, params.mu])


def noisy_coefficients(params: NoisyParams) -> AffineDecomposition:
    """Closed-form basis coefficients after protocol B on a noisy ld box."""
    xi, g, d = params.xi, params.gamma, params.d
    inv2 = 1.0 / d**2
    c_nl = (1 - inv2) * xi**2 + (2 - inv2) * xi * g + inv2 * xi
    c_ld = g**2
    c_mix = (1 + xi + g) * (1 - xi - g)
    c_lc = -inv2 * xi * (1 - xi - g)
    return AffineDecomposition(c_nl, c_lc, c_ld, c_mix, residual=0.0)


def noisy_final_cglmp(params: NoisyParams) -> float:
    """Final CGLMP value after protocol B on ``xi*nl + gamma*ld + mu*mixed``.

    ``d`` may be ``math.inf`` for the limit polynomial ``4 xi^2 + 8 xi gamma + 2 gamma^2``.
    """
    xi, g = params.xi, params.gamma
    inv2 = _inv(params.d) ** 2
    return (4 - 2 * inv2) * xi**2 + (8 - 2 * inv2) * xi * g + 2 * inv2 * xi + 2 * g**2


def printed_noisy_final_cglmp(params: NoisyParams) -> float:
    """The alternative polynomial with ``(4 + 2/d^2) xi^2``; exceeds 4 at ``xi = 1``.

    Kept only so the verification suite can show it disagrees with the
    composed box.
    """
    xi, g = params.xi, params.gamma
    inv2 = _inv(params.d) ** 2
    return (4 + 2 * inv2) * xi**2 + (8 - 2 * inv2) * xi * g + 2 * inv2 * xi + 2 * g**2


def noisy_lc_final_cglmp(params: NoisyParams) -> float:
    """Final CGLMP value after protocol A on ``xi*nl + gamma*lc + mu*mixed``."""
    xi, g = params.xi, params.gamma
    inv = _inv(params.d)
    inv2 = inv**2
    return (4 - 2 * inv2) * xi**2 + (6 + 2 * inv - 2 * inv2) * xi * g + 2 * inv2 * xi + 2 * g**2


def distill_noisy(params: NoisyParams) -> DistillationResult:
    """One round on a noisy box: protocol B for the ld family, A for lc."""
    if math.isinf(params.d):
        raise ValueError("brute-force distillation needs a finite dimension")
    box = build_noisy(params)
    if params.local_family is Family.LD:
        final = wire(box, box, comparator_wiring(params.d, 1))
        predicted = noisy_coefficients(params).reconstruct(params.d)
        prediction = noisy_final_cglmp(params)
        residual = final.distance(predicted)
    else:
        final = wire(box, box, comparator_wiring(params.d, 0))
        prediction = noisy_lc_final_cglmp(params)
        residual = None
    final_value = cglmp_value(final).value
    if residual is None:
        residual = abs(final_value - prediction)
    return DistillationResult(
        final_box=final,
        initial_cglmp=cglmp_value(box).value,
        final_cglmp=final_value,
        closed_form_prediction=prediction,
        oracle_residual=residual,
        final_decomposition=decompose_affine(final),
    )


def rounds_to_reach(protocol: Protocol, epsilon: float, d, target_cglmp: float, max_rounds: int = 10_000) -> int | None:
    """Smallest number of closed-form rounds after which CGLMP >= target."""
    for n in range(max_rounds + 1):
        if 2.0 + 2.0 * epsilon >= target_cglmp:
            return n
        epsilon = predict_epsilon(protocol, epsilon, d)
    return None

