"""Concurrence, Uhlmann fidelity and the spin-correlation matrix."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .linalg import PAULIS, SIGMA_Y, clip_spectrum, hermitian_eig, kron, psd_sqrt
from .states import require_state

SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)


def _dagger(m):
    return np.swapaxes(m, -1, -2).conj()


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """``(sy x sy) rho* (sy x sy)``."""
    return SPIN_FLIP @ np.asarray(rho).conj() @ SPIN_FLIP


def wootters_sqrt_spectrum(rho: np.ndarray) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho rho~``, in descending order.

    Uses the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)``, which shares its
    spectrum with ``rho rho~``. Round-off eigenvalues (negative, or below the
    numerical-rank cutoff) are set to zero.
    """
    root = psd_sqrt(rho)
    r = root @ spin_flip(rho) @ root
    r = 0.5 * (r + _dagger(r))
    lam = hermitian_eig(r).eigenvalues
    return np.sqrt(clip_spectrum(lam))


def wootters_margin(rho: np.ndarray):
    """Signed quantity ``l1 - l2 - l3 - l4`` whose positive part is the concurrence.

    Unlike :func:`concurrence` this does not clip at zero, so it changes sign
    at the separable/entangled boundary and can be root-bracketed. No state
    validation is done here.
    """
    s = wootters_sqrt_spectrum(np.asarray(rho, dtype=complex))
    return s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3]


def concurrence(rho: np.ndarray):
    """Wootters concurrence of a two-qubit density matrix (or stack of them).

    Raises:
        ContractViolation: if ``rho`` is not a valid density matrix.
    """
    rho = require_state(rho)
    c = np.maximum(wootters_margin(rho), 0.0)
    return float(c) if c.ndim == 0 else c


def fidelity(rho: np.ndarray, sigma: np.ndarray):
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` (not squared)."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape[-2:] != sigma.shape[-2:]:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    shape = rho.shape[-2:]
    require_state(rho, shape)
    require_state(sigma, shape)
    root = psd_sqrt(rho)
    m = root @ sigma @ root
    m = 0.5 * (m + _dagger(m))
    lam = hermitian_eig(m).eigenvalues
    f = np.sum(np.sqrt(clip_spectrum(lam)), axis=-1)
    return float(f) if f.ndim == 0 else f


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """Real 3x3 matrix ``T_ij = Tr[rho (s_i x s_j)]``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise DimensionError(f"expected 4x4 density matrix, got {rho.shape}")
    t = np.empty(rho.shape[:-2] + (3, 3), dtype=complex)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            t[..., i, j] = np.trace(rho @ kron(si, sj), axis1=-2, axis2=-1)
    return t.real
