"""Small dense linear algebra helpers shared by the rest of the package.

Everything here works on plain numpy arrays. Bipartite operations take the
two factor dimensions explicitly and assume row-major (C) ordering, so
``vec(A)`` is ``A.reshape(-1)`` and ``tensor(A, B)`` is ``np.kron(A, B)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_RTOL = 1e-10


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators, left to right."""
    if not ops:
        raise ValueError("tensor() needs at least one operator")
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op))
    return out


def _check_bipartite(m: np.ndarray, dim_first: int, dim_second: int) -> np.ndarray:
    m = np.asarray(m)
    n = dim_first * dim_second
    if m.shape != (n, n):
        raise ValueError(
            f"expected a {n}x{n} matrix for factor dims ({dim_first}, {dim_second}), "
            f"got shape {m.shape}"
        )
    return m


def partial_trace(
    m: np.ndarray, dim_first: int, dim_second: int, factor: str = "second"
) -> np.ndarray:
    """Trace out one tensor factor of an operator on C^d1 (x) C^d2.

    ``factor`` names the factor that is traced away: tracing the second
    factor of A (x) B returns tr(B) * A.
    """
    m = _check_bipartite(m, dim_first, dim_second)
    t = m.reshape(dim_first, dim_second, dim_first, dim_second)
    if factor == "second":
        return np.trace(t, axis1=1, axis2=3)
    if factor == "first":
        return np.trace(t, axis1=0, axis2=2)
    raise ValueError(f"factor must be 'first' or 'second', got {factor!r}")


def partial_transpose(
    m: np.ndarray, dim_first: int, dim_second: int, factor: str = "second"
) -> np.ndarray:
    """Transpose one tensor factor: A (x) B -> A (x) B^T for factor='second'."""
    m = _check_bipartite(m, dim_first, dim_second)
    t = m.reshape(dim_first, dim_second, dim_first, dim_second)
    if factor == "second":
        t = t.transpose(0, 3, 2, 1)
    elif factor == "first":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"factor must be 'first' or 'second', got {factor!r}")
    n = dim_first * dim_second
    return t.reshape(n, n)


def vec(a: np.ndarray) -> np.ndarray:
    """Row-major vectorization, vec(|a><b|) = |a> (x) |b>."""
    return np.asarray(a).reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape length-{v.size} vector to {rows}x{cols}")
    return v.reshape(rows, cols)


def schatten_norm(m: np.ndarray, p) -> float:
    """Schatten p-norm for p in {1, 2, inf}.

    p=1 is the trace norm, p=2 the Frobenius norm, p=inf the largest
    singular value. Other orders are not needed here and are rejected.
    """
    m = np.asarray(m)
    if p == 2:
        return float(np.linalg.norm(m))
    if p == 1:
        return float(np.sum(np.linalg.svd(m, compute_uv=False)))
    if p in (np.inf, "inf"):
        return float(np.linalg.norm(m, 2))
    raise ValueError(f"unsupported Schatten order {p!r}, use 1, 2 or inf")


@dataclass(frozen=True)
class EigDecomposition:
    """Eigensystem of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, eigenvectors[:, i] <-> eigenvalues[i]


def hermitian_eig(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> EigDecomposition:
    """Eigendecomposition that refuses matrices far from Hermitian.

    The input is accepted when ||M - M^dag||_inf <= rtol * max(1, ||M||_inf)
    and then symmetrized before calling eigh, so tiny round-off asymmetry
    cannot leak into the spectrum.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    gap = schatten_norm(m - m.conj().T, np.inf)
    scale = max(1.0, schatten_norm(m, np.inf))
    if gap > rtol * scale:
        raise ValueError(
            f"matrix is not Hermitian: ||M - M^dag||_inf = {gap:.3e} "
            f"exceeds {rtol:.1e} * max(1, ||M||_inf) = {rtol * scale:.3e}"
        )
    sym = 0.5 * (m + m.conj().T)
    vals, vecs = np.linalg.eigh(sym)
    return EigDecomposition(eigenvalues=vals, eigenvectors=vecs)


def swap_matrix(d: int) -> np.ndarray:
    """Swap operator on C^d (x) C^d."""
    s = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            s[a * d + b, b * d + a] = 1.0
    return s


def antisym_projector(d: int) -> np.ndarray:
    """Projector onto the antisymmetric subspace of C^d (x) C^d."""
    return 0.5 * (np.eye(d * d) - swap_matrix(d))


def sym_projector(d: int) -> np.ndarray:
    """Projector onto the symmetric subspace of C^d (x) C^d."""
    return 0.5 * (np.eye(d * d) + swap_matrix(d))
