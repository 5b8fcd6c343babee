"""Minimum gate fidelity estimation.

Scanning a finite epsilon-net of pure states gives an upper value net_min;
the Lipschitz constant 3 sqrt(2) turns it into the certified lower bound
net_min - 3 sqrt(2) eps for the true minimum. A multi-start projected
descent provides an independent reference value at small dimension, and
concentration of measure gives the quantile-based effective minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import QuantumChannel
from .fidelity import (
    CONCENTRATION_C,
    LIPSCHITZ_CONSTANT,
    gate_fidelity_batch,
    phase_min_distance,
)
from .sampling import (
    BLOCK_SIZE,
    DEFAULT_SEED,
    TAG_NET,
    TAG_OPTIMIZER,
    TAG_VALIDATE,
    _haar_block,
    as_rng_spec,
    generator,
)

REFERENCE_DIM_LIMIT = 32


class NetCoverageError(RuntimeError):
    """Raised when a net cannot be validated within the state budget."""


@dataclass(frozen=True)
class StateNet:
    """Finite set of pure states resolving state space to within epsilon.

    Distances are Euclidean after minimizing over global phase. The
    coverage_confidence records the statistically validated level: fresh
    Haar samples found a net neighbor within epsilon often enough to
    certify the stated miss mass at that confidence.
    """

    d: int
    epsilon: float
    metric_id: str
    states: np.ndarray  # (n, d) rows
    coverage_confidence: float
    seed: int


def _min_distances(points: np.ndarray, net_states: np.ndarray) -> np.ndarray:
    """Distance from each point (row) to its nearest net state."""
    overlap = np.abs(points.conj() @ net_states.T)
    gap = np.clip(2.0 - 2.0 * overlap.max(axis=1), 0.0, None)
    return np.sqrt(gap)


def build_net(
    d: int,
    epsilon: float,
    rng=DEFAULT_SEED,
    max_states: int = 2000,
    confidence: float = 0.99,
    miss_tolerance: float | None = None,
    stop_rejections: int = 200,
) -> StateNet:
    """Greedy random packing with a statistical coverage certificate.

    Haar candidates are kept when at least epsilon away from every kept
    state; packing stops after stop_rejections consecutive rejections.
    Coverage is then validated on fresh samples: certifying miss mass at
    most miss_tolerance (default 1 - confidence) at the requested
    confidence needs ceil(ln(1/(1-confidence)) / miss_tolerance)
    consecutive covered samples. An uncovered sample joins the net and the
    count restarts. Exhausting max_states raises NetCoverageError rather
    than returning a net that missed validation.
    """
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    if miss_tolerance is None:
        miss_tolerance = 1.0 - confidence
    if not 0.0 < miss_tolerance < 1.0:
        raise ValueError(f"miss tolerance must lie in (0, 1), got {miss_tolerance}")
    spec = as_rng_spec(rng)

    kept: list[np.ndarray] = []
    matrix = np.zeros((0, d), dtype=complex)
    rejections = 0
    block = 0
    while rejections < stop_rejections:
        candidates = _haar_block(d, spec, TAG_NET, block, BLOCK_SIZE)
        block += 1
        for row in candidates:
            if len(kept) == 0 or float(_min_distances(row[None, :], matrix)[0]) >= epsilon:
                kept.append(row)
                matrix = np.asarray(kept)
                rejections = 0
                if len(kept) > max_states:
                    raise NetCoverageError(
                        f"packing exceeded the {max_states}-state budget at d={d}, "
                        f"epsilon={epsilon}; enlarge max_states or epsilon"
                    )
            else:
                rejections += 1
                if rejections >= stop_rejections:
                    break

    needed = math.ceil(math.log(1.0 / (1.0 - confidence)) / miss_tolerance)
    streak = 0
    vblock = 0
    while streak < needed:
        samples = _haar_block(d, spec, TAG_VALIDATE, vblock, BLOCK_SIZE)
        vblock += 1
        dists = _min_distances(samples, matrix)
        for i, dist in enumerate(dists):
            if dist <= epsilon:
                streak += 1
                if streak >= needed:
                    break
            else:
                kept.append(samples[i])
                matrix = np.asarray(kept)
                streak = 0
                if len(kept) > max_states:
                    raise NetCoverageError(
                        f"coverage repair exceeded the {max_states}-state budget at "
                        f"d={d}, epsilon={epsilon}"
                    )
    achieved = 1.0 - (1.0 - miss_tolerance) ** needed
    return StateNet(
        d=d,
        epsilon=float(epsilon),
        metric_id="euclidean",
        states=matrix,
        coverage_confidence=achieved,
        seed=spec.seed,
    )


@dataclass(frozen=True)
class MinEstimate:
    """Minimum over a net plus the Lipschitz certificate it implies."""

    net_min: float
    lipschitz_lower_bound: float
    argmin_state: np.ndarray
    method: str


def net_minimum(e: QuantumChannel, u, net: StateNet) -> MinEstimate:
    """Exact minimum over the net points; ties broken by first index."""
    if net.d != e.dim_in:
        raise ValueError(f"net dimension {net.d} != channel dimension {e.dim_in}")
    f = gate_fidelity_batch(e, u, net.states)
    idx = int(np.argmin(f))
    net_min = float(f[idx])
    return MinEstimate(
        net_min=net_min,
        lipschitz_lower_bound=net_min - LIPSCHITZ_CONSTANT * net.epsilon,
        argmin_state=net.states[idx],
        method="net-scan",
    )


def _descend(e: QuantumChannel, u, x: np.ndarray, h: float = 1e-6) -> float:
    """Projected gradient descent from one start on the unit sphere."""
    d = len(x)
    val = float(gate_fidelity_batch(e, u, x))
    step = 0.25
    for _ in range(400):
        bundle = np.tile(x, (4 * d, 1))
        for j in range(d):
            bundle[4 * j + 0, j] += h
            bundle[4 * j + 1, j] -= h
            bundle[4 * j + 2, j] += 1j * h
            bundle[4 * j + 3, j] -= 1j * h
        bundle /= np.linalg.norm(bundle, axis=1, keepdims=True)
        f = gate_fidelity_batch(e, u, bundle)
        grad = (f[0::4] - f[1::4]) / (2 * h) + 1j * (f[2::4] - f[3::4]) / (2 * h)
        grad -= np.real(np.vdot(x, grad)) * x  # radial part is irrelevant
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-12:
            break
        moved = False
        while step > 1e-14:
            cand = x - step * grad
            cand /= np.linalg.norm(cand)
            cval = float(gate_fidelity_batch(e, u, cand))
            if cval < val - 1e-15:
                x, val = cand, cval
                step *= 1.3
                moved = True
                break
            step *= 0.5
        if not moved or step * gnorm < 1e-10:
            break
    return val


def reference_minimum(e: QuantumChannel, u, n_starts: int = 8, rng=DEFAULT_SEED) -> float:
    """Best value over multi-start local descent; the desk-scale oracle.

    Local descent cannot certify globality, so treat the result as a
    consistent reference, not ground truth. Restricted to d <= 32 where
    multi-start coverage of the sphere is still meaningful.
    """
    if e.dim_in != e.dim_out:
        raise ValueError(f"need a square channel, got {e.dim_in}->{e.dim_out}")
    if e.dim_in > REFERENCE_DIM_LIMIT:
        raise ValueError(
            f"reference minimizer is limited to d <= {REFERENCE_DIM_LIMIT}, got {e.dim_in}"
        )
    if n_starts < 1:
        raise ValueError(f"need at least one start, got {n_starts}")
    spec = as_rng_spec(rng)
    g = generator(spec, TAG_OPTIMIZER)
    d = e.dim_in
    best = np.inf
    for _ in range(n_starts):
        z = g.standard_normal(d) + 1j * g.standard_normal(d)
        best = min(best, _descend(e, u, z / np.linalg.norm(z)))
    return float(best)


def effective_epsilon(q: float, d: int) -> float:
    """Deviation scale epsilon_{Q,d} = sqrt(ln(2/Q) / (C d)) from concentration."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile mass must lie in (0, 1), got {q}")
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return float(np.sqrt(np.log(2.0 / q) / (CONCENTRATION_C * d)))


def effective_minimum(avg: float, q: float, d: int) -> tuple:
    """Interval [max(0, avg - eps_{Q,d}), avg] containing the effective minimum.

    All but a Haar mass Q of states have fidelity above the lower end. The
    interval is honest but vacuous when eps_{Q,d} >= avg, which happens for
    every interesting Q at small d; it tightens to the average as d grows.
    """
    if not 0.0 <= avg <= 1.0:
        raise ValueError(f"average must lie in [0, 1], got {avg}")
    eps = effective_epsilon(q, d)
    return (max(0.0, avg - eps), float(avg))


def nearest_net_distance(net: StateNet, states: np.ndarray) -> np.ndarray:
    """Distance from each given state to the nearest net member.

    Exposed for coverage spot checks; uses the same phase-minimized metric
    as construction, so nearest_net_distance(net, net.states) is zero.
    """
    states = np.asarray(states, dtype=complex)
    if states.ndim == 1:
        states = states[None, :]
    if states.shape[1] != net.d:
        raise ValueError(f"state dimension {states.shape[1]} != net dimension {net.d}")
    return _min_distances(states, net.states)


def phase_min_distance_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All pairwise phase-minimized distances between two state batches."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = np.abs(a.conj() @ b.T)
    return np.sqrt(np.clip(2.0 - 2.0 * overlap, 0.0, None))


__all__ = [
    "NetCoverageError",
    "StateNet",
    "MinEstimate",
    "build_net",
    "net_minimum",
    "reference_minimum",
    "effective_epsilon",
    "effective_minimum",
    "nearest_net_distance",
    "phase_min_distance",
    "phase_min_distance_matrix",
]
