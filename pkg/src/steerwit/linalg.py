"""Dense linear algebra for 2x2, 3x3 and 4x4 matrices.

Matrices are plain ``numpy.ndarray`` objects (row-major, complex128 unless
noted). The eigensolver is a cyclic complex Jacobi iteration, which is
unconditionally convergent for Hermitian input and plenty fast at these
sizes. Two-qubit ordering is ``|HH>, |HV>, |VH>, |VV>`` with ``|H> = (1, 0)``
and ``|V> = (0, 1)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import ContractViolation, DimensionError, NotPSDError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
JACOBI_TOL = 1e-14
# eigenvalues this small relative to the largest are round-off (observed
# noise floor is ~4e-16); zeroed before square roots are taken
RANK_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class HermitianEigenSystem(NamedTuple):
    """Eigenvalues in descending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, broadcasting over any leading stack axes."""
    a = np.asarray(a)
    b = np.asarray(b)
    ra, ca = a.shape[-2:]
    rb, cb = b.shape[-2:]
    out = a[..., :, None, :, None] * b[..., None, :, None, :]
    return out.reshape(*out.shape[:-4], ra * rb, ca * cb)


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduce a two-qubit operator to one qubit.

    Args:
        rho: 4x4 operator on A (first factor) and B (second factor), or a
            stack of them.
        keep: ``"A"`` traces out B, ``"B"`` traces out A.

    Returns:
        The 2x2 reduced operator.
    """
    rho = np.asarray(rho)
    if rho.shape[-2:] != (4, 4):
        raise DimensionError(f"partial_trace expects a 4x4 matrix, got {rho.shape}")
    r = rho.reshape(*rho.shape[:-2], 2, 2, 2, 2)
    if keep == "A":
        return np.einsum("...ijkj->...ik", r)
    if keep == "B":
        return np.einsum("...ijik->...jk", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest absolute entry of ``m - m^dagger`` (over a whole stack, if given)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - np.swapaxes(m, -1, -2).conj())))


def _jacobi_rotate(a, v, p, q):
    apq = a[:, p, q]
    mag = np.abs(apq)
    live = mag > 1e-300
    safe = np.where(live, mag, 1.0)
    phase = np.where(live, apq / safe, 1.0)
    zeta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
    t = np.where(live, np.copysign(1.0, zeta) / (np.abs(zeta) + np.hypot(1.0, zeta)), 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # unitary on the (p, q) plane: phase fix-up followed by a real rotation
    g = np.empty((a.shape[0], 2, 2), dtype=complex)
    g[:, 0, 0] = c
    g[:, 0, 1] = s
    g[:, 1, 0] = -s * phase.conj()
    g[:, 1, 1] = c * phase.conj()
    idx = [p, q]
    a[:, :, idx] = a[:, :, idx] @ g
    a[:, idx, :] = g.conj().transpose(0, 2, 1) @ a[:, idx, :]
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    v[:, :, idx] = v[:, :, idx] @ g


def hermitian_eig(m: np.ndarray) -> HermitianEigenSystem:
    """Eigendecomposition of Hermitian matrices by cyclic Jacobi sweeps.

    Accepts a single ``(n, n)`` matrix or a stack ``(..., n, n)``; the sweep is
    vectorized over the leading axes. Each matrix is swept until its
    off-diagonal Frobenius norm drops below ``JACOBI_TOL`` (relative to
    ``max(1, ||m||_F)``), and results are bit-identical to decomposing it alone.

    Raises:
        ContractViolation: if any input is not Hermitian within ``HERMITIAN_TOL``.
    """
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"hermitian_eig expects square matrices, got {m.shape}")
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise ContractViolation(f"matrix is not Hermitian (defect {defect:.3e})")
    lead = m.shape[:-2]
    n = m.shape[-1]
    a = m.reshape(-1, n, n).astype(complex)
    a = 0.5 * (a + a.conj().transpose(0, 2, 1))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    scale = np.maximum(1.0, np.linalg.norm(a, axis=(1, 2)))
    off_mask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a[:, off_mask]) ** 2, axis=1))
        active = off >= JACOBI_TOL * scale
        if not active.any():
            break
        # converged matrices are left alone, so each result is independent
        # of what else shares the stack
        sub_a, sub_v = a[active], v[active]
        for p, q in pairs:
            _jacobi_rotate(sub_a, sub_v, p, q)
        a[active] = sub_a
        v[active] = sub_v
    else:
        raise ContractViolation("Jacobi iteration did not converge")
    w = np.diagonal(a, axis1=1, axis2=2).real
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return HermitianEigenSystem(w.reshape(*lead, n), v.reshape(*lead, n, n))


def clip_spectrum(w: np.ndarray) -> np.ndarray:
    """Zero eigenvalues that are negative or below the numerical-rank cutoff.

    ``w`` is sorted descending along its last axis, as returned by
    :func:`hermitian_eig`.
    """
    w = np.asarray(w, dtype=float)
    cutoff = RANK_RTOL * np.maximum(w[..., :1], 0.0)
    return np.where(w > cutoff, w, 0.0)


def _dagger(m):
    return np.swapaxes(m, -1, -2).conj()


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-PSD_TOL, 0)`` are treated as round-off and clamped to 0,
    as are positive ones below the ``RANK_RTOL`` cutoff. Works on stacks of
    matrices like :func:`hermitian_eig`.
    """
    w, v = hermitian_eig(m)
    lowest = float(np.min(w[..., -1]))
    if lowest < -PSD_TOL:
        raise NotPSDError(f"matrix has eigenvalue {lowest:.3e} < {-PSD_TOL}")
    root = np.sqrt(clip_spectrum(w))
    out = (v * root[..., None, :]) @ _dagger(v)
    return 0.5 * (out + _dagger(out))


def max_singular_value_3x3(t: np.ndarray) -> float:
    """Largest singular value of a real 3x3 matrix.

    Equals ``max m^T t n`` over unit vectors ``m`` and ``n``; obtained from the
    top eigenvalue of ``t^T t``.
    """
    t = np.asarray(t)
    if t.shape != (3, 3):
        raise DimensionError(f"expected a 3x3 matrix, got {t.shape}")
    if np.iscomplexobj(t):
        if np.max(np.abs(t.imag)) > 1e-12:
            raise ContractViolation("correlation matrix has imaginary entries")
        t = t.real
    gram = t.T @ t
    top = hermitian_eig(gram).eigenvalues[0]
    return math.sqrt(max(top, 0.0))
