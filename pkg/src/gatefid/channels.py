"""Quantum channels in Kraus and Choi form.

A channel is stored as a tuple of Kraus operators A_k mapping C^dim_in to
C^dim_out, Lambda(rho) = sum_k A_k rho A_k^dag. The Choi matrix follows the
convention

    J(Lambda) = sum_{a,b} Lambda(|a><b|) (x) |a><b|

with the *output* factor first, so tr J = dim_in for a trace-preserving map
and trace preservation reads tr_out J = I_in (a partial trace over the first
factor). With row-major vectorization this is J = sum_k vec(A_k) vec(A_k)^dag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eig, partial_trace, schatten_norm, unvec, vec

DEFAULT_ATOL = 1e-9
RANK_TOL = 1e-10


@dataclass(frozen=True)
class QuantumChannel:
    """Kraus representation of a linear map from dim_in to dim_out."""

    dim_in: int
    dim_out: int
    kraus: tuple


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix of a channel, output factor first, trace dim_in when TP."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray


@dataclass(frozen=True)
class CptpReport:
    """Outcome of a CPTP check. Diagnoses, never raises.

    min_eigenvalue is the smallest eigenvalue of the symmetrized Choi
    matrix, tp_residual is ||tr_out J - I||_inf and hermiticity_gap is
    ||J - J^dag||_inf. is_cp and is_tp compare those against tolerance.
    """

    is_cp: bool
    is_tp: bool
    min_eigenvalue: float
    tp_residual: float
    hermiticity_gap: float
    tolerance: float


def channel_from_kraus(ops) -> QuantumChannel:
    """Build a channel from an iterable of equally shaped Kraus operators."""
    kraus = tuple(np.array(op, dtype=complex) for op in ops)
    if not kraus:
        raise ValueError("a channel needs at least one Kraus operator")
    shape = kraus[0].shape
    if len(shape) != 2:
        raise ValueError(f"Kraus operators must be matrices, got shape {shape}")
    for op in kraus[1:]:
        if op.shape != shape:
            raise ValueError(f"inconsistent Kraus shapes {shape} and {op.shape}")
    d_out, d_in = shape
    return QuantumChannel(dim_in=d_in, dim_out=d_out, kraus=kraus)


def choi_from_kraus(ch: QuantumChannel) -> ChoiMatrix:
    n = ch.dim_in * ch.dim_out
    j = np.zeros((n, n), dtype=complex)
    for op in ch.kraus:
        v = vec(op)
        j += np.outer(v, v.conj())
    return ChoiMatrix(dim_in=ch.dim_in, dim_out=ch.dim_out, matrix=j)


def kraus_from_choi(choi: ChoiMatrix, rank_tol: float = RANK_TOL) -> QuantumChannel:
    """Extract a canonical Kraus representation from a Choi matrix.

    Eigenvalues at or below rank_tol are dropped; an eigenvalue below
    -rank_tol (relative to the largest) means the map is not completely
    positive and is rejected. Kraus operators come out ordered by
    descending eigenvalue with the first nonzero component of each
    eigenvector rotated to the positive real axis, so equal Choi matrices
    give identical tuples up to eigenspace degeneracy.
    """
    eig = hermitian_eig(choi.matrix)
    vals = eig.eigenvalues
    scale = max(1.0, float(vals[-1]))
    if vals[0] < -rank_tol * scale:
        raise ValueError(
            f"Choi matrix has negative eigenvalue {vals[0]:.3e}, map is not CP"
        )
    ops = []
    for i in range(len(vals) - 1, -1, -1):
        if vals[i] <= rank_tol:
            break
        col = eig.eigenvectors[:, i]
        anchor = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
        phase = col[anchor] / abs(col[anchor])
        col = col * phase.conj()
        ops.append(unvec(np.sqrt(vals[i]) * col, choi.dim_out, choi.dim_in))
    if not ops:
        raise ValueError("Choi matrix has no eigenvalue above rank_tol")
    return QuantumChannel(dim_in=choi.dim_in, dim_out=choi.dim_out, kraus=tuple(ops))


def validate_cptp(obj, tol: float = DEFAULT_ATOL) -> CptpReport:
    """Check complete positivity and trace preservation of a channel or Choi.

    Always returns a report; callers decide whether a violation is fatal.
    The trace-preservation residual is taken on the partial trace over the
    output (first) factor, which must equal the input-space identity.
    """
    choi = choi_from_kraus(obj) if isinstance(obj, QuantumChannel) else obj
    j = choi.matrix
    gap = schatten_norm(j - j.conj().T, np.inf)
    vals = np.linalg.eigvalsh(0.5 * (j + j.conj().T))
    min_eig = float(vals[0])
    marginal = partial_trace(j, choi.dim_out, choi.dim_in, factor="first")
    tp_residual = schatten_norm(marginal - np.eye(choi.dim_in), np.inf)
    return CptpReport(
        is_cp=bool(min_eig >= -tol),
        is_tp=bool(tp_residual <= tol),
        min_eigenvalue=min_eig,
        tp_residual=tp_residual,
        hermiticity_gap=gap,
        tolerance=tol,
    )


def apply_channel(ch: QuantumChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise ValueError(
            f"state shape {rho.shape} does not match channel input dim {ch.dim_in}"
        )
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    for op in ch.kraus:
        out += op @ rho @ op.conj().T
    return out


def adjoint(ch: QuantumChannel) -> QuantumChannel:
    """Adjoint map with respect to the Hilbert-Schmidt inner product."""
    return channel_from_kraus(tuple(op.conj().T for op in ch.kraus))


def compose(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    """Channel rho -> second(first(rho)).

    The product Kraus family is pruned through a Choi round trip when it
    exceeds dim_in * dim_out operators, so repeated composition cannot blow
    up the representation size.
    """
    if first.dim_out != second.dim_in:
        raise ValueError(
            f"cannot compose: first outputs dim {first.dim_out}, "
            f"second expects dim {second.dim_in}"
        )
    ops = tuple(b @ a for b in second.kraus for a in first.kraus)
    ch = QuantumChannel(dim_in=first.dim_in, dim_out=second.dim_out, kraus=ops)
    if len(ops) > ch.dim_in * ch.dim_out:
        ch = kraus_from_choi(choi_from_kraus(ch))
    return ch


def unitary_channel(u: np.ndarray, atol: float = 1e-10) -> QuantumChannel:
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if u.shape != (d, d):
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    if schatten_norm(u.conj().T @ u - np.eye(d), np.inf) > atol:
        raise ValueError("matrix is not unitary within tolerance")
    return QuantumChannel(dim_in=d, dim_out=d, kraus=(u,))


def identity_channel(d: int) -> QuantumChannel:
    return unitary_channel(np.eye(d))


def reduce_to_lambda(e: QuantumChannel, u: np.ndarray) -> QuantumChannel:
    """Fold the target unitary into the channel: rho -> U^dag E(rho) U.

    Gate fidelity of (E, U) equals gate fidelity of the reduced channel
    against the identity, which is what most estimators here consume.
    """
    return compose(unitary_channel(np.asarray(u).conj().T), e)


def _pauli_strings(n: int):
    one = [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    for combo in itertools.product(one, repeat=n):
        op = combo[0]
        for factor in combo[1:]:
            op = np.kron(op, factor)
        yield op


def _clock_shift(d: int):
    omega = np.exp(2j * np.pi / d)
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j + 1) % d, j] = 1.0
    z = np.diag(omega ** np.arange(d))
    for a, b in itertools.product(range(d), repeat=2):
        yield np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)


def unitary_operator_basis(d: int) -> list:
    """d^2 unitaries, identity first, orthogonal under tr(P_i^dag P_j) = d delta_ij.

    Pauli strings when d is a power of two, clock and shift monomials
    otherwise. Either family averages any state to the maximally mixed one,
    which is the property the depolarizing construction relies on.
    """
    n = d.bit_length() - 1
    if d == 2**n:
        return list(_pauli_strings(n))
    return list(_clock_shift(d))


def depolarizing(p: float, d: int) -> QuantumChannel:
    """Depolarizing channel rho -> p rho + (1 - p) tr(rho) I / d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {p}")
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    basis = unitary_operator_basis(d)
    ops = [np.sqrt(p + (1.0 - p) / d**2) * basis[0]]
    w = np.sqrt(1.0 - p) / d
    ops.extend(w * b for b in basis[1:])
    return channel_from_kraus(ops)


def amplitude_damping(gamma: float) -> QuantumChannel:
    """Single-qubit decay channel with excited-state loss probability gamma."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping parameter must lie in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return channel_from_kraus((k0, k1))


def random_channel(d: int, kraus_rank: int, rng) -> QuantumChannel:
    """Haar-style random CPTP map via a random Stinespring isometry.

    A (d * kraus_rank) x d complex Gaussian matrix is orthonormalized by QR;
    its d x d blocks are the Kraus operators, so trace preservation holds by
    construction.
    """
    if kraus_rank < 1:
        raise ValueError("kraus_rank must be positive")
    g = np.random.default_rng(rng)
    raw = g.standard_normal((d * kraus_rank, d)) + 1j * g.standard_normal(
        (d * kraus_rank, d)
    )
    q, _ = np.linalg.qr(raw)
    return channel_from_kraus(tuple(q[i * d : (i + 1) * d, :] for i in range(kraus_rank)))


def phase_spread_unitary(d: int, rng, spread: float = 1.0) -> QuantumChannel:
    """Random unitary channel whose phases stay spread as d grows.

    Eigenphases are equispaced on [-spread, spread] in a Haar-random
    eigenbasis. Unlike a fully Haar unitary, the spectrum does not fill the
    circle, so the gate fidelity against the identity keeps an O(1) mean
    while its per-state fluctuations shrink like 1/sqrt(d). Used as the
    default family in convergence reports.
    """
    g = np.random.default_rng(rng)
    raw = g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))
    q, r = np.linalg.qr(raw)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))  # Haar phase fix
    phases = np.exp(1j * np.linspace(-spread, spread, d))
    return unitary_channel((q * phases) @ q.conj().T)


def channels_close(a: QuantumChannel, b: QuantumChannel, atol: float = 1e-9) -> bool:
    """Equality of the maps themselves: compare Choi matrices, not Kraus lists."""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        return False
    ja = choi_from_kraus(a).matrix
    jb = choi_from_kraus(b).matrix
    return schatten_norm(ja - jb, np.inf) <= atol
