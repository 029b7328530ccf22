"""Target state family and the two constructed witness states.

The target family mixes a partially entangled pure state with local noise on
Alice's side::

    rho(alpha, theta) = alpha |psi><psi| + (1 - alpha) I/2 (x) rho_B
    |psi(theta)> = cos(theta) |HH> + sin(theta) |VV>

where ``rho_B`` is Bob's marginal of the *pure* state. From any two-qubit
state two auxiliary states are built::

    tau1 = mu1 rho + (1 - mu1) rho_A (x) I/2
    tau2 = mu2 rho + (1 - mu2) I/2 (x) rho_B

Entanglement of ``tau1`` certifies steering from Bob to Alice, entanglement
of ``tau2`` certifies steering from Alice to Bob, for ``mu`` in
``[0, 1/sqrt(3)]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DimensionError, ParameterError
from .linalg import I2, hermitian_eig, hermiticity_defect, kron, partial_trace

MU_MAX = 1.0 / math.sqrt(3.0)
MU_DEFAULT = MU_MAX
THETA_MAX = math.pi / 4

# Range checks forgive this much overshoot so that decimal inputs such as
# theta=0.7854 are accepted; values are used as given, never clamped.
RANGE_SLACK = 1e-5
STATE_TOL = 1e-10


def _check_range(name, value, lo, hi):
    if not math.isfinite(value) or value < lo - RANGE_SLACK or value > hi + RANGE_SLACK:
        raise ParameterError(f"{name}={value!r} outside [{lo:.6g}, {hi:.6g}]")
    return float(value)


def check_alpha(alpha: float) -> float:
    return _check_range("alpha", alpha, 0.0, 1.0)


def check_theta(theta: float) -> float:
    return _check_range("theta", theta, 0.0, THETA_MAX)


def check_mu(mu: float, name: str = "mu") -> float:
    return _check_range(name, mu, 0.0, MU_MAX)


@dataclass(frozen=True)
class StateFamilyParams:
    """Point in the (alpha, theta) family together with the mixing weights."""

    alpha: float
    theta: float
    mu1: float = MU_DEFAULT
    mu2: float = MU_DEFAULT

    def __post_init__(self):
        check_alpha(self.alpha)
        check_theta(self.theta)
        check_mu(self.mu1, "mu1")
        check_mu(self.mu2, "mu2")

    def target(self) -> np.ndarray:
        return target_state(self.alpha, self.theta)

    def tau1(self) -> np.ndarray:
        return construct_tau1(self.target(), self.mu1)

    def tau2(self) -> np.ndarray:
        return construct_tau2(self.target(), self.mu2)


@dataclass(frozen=True)
class ValidityReport:
    """Numerical defects of a candidate density matrix."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    tol: float = STATE_TOL

    @property
    def hermitian(self) -> bool:
        return self.hermiticity_defect <= self.tol

    @property
    def unit_trace(self) -> bool:
        return self.trace_defect <= self.tol

    @property
    def positive(self) -> bool:
        return self.min_eigenvalue >= -self.tol

    @property
    def ok(self) -> bool:
        return self.hermitian and self.unit_trace and self.positive

    def flags(self) -> list[str]:
        out = []
        if not self.hermitian:
            out.append(f"hermiticity defect {self.hermiticity_defect:.3e}")
        if not self.unit_trace:
            out.append(f"trace defect {self.trace_defect:.3e}")
        if not self.positive:
            out.append(f"min eigenvalue {self.min_eigenvalue:.3e}")
        return out


def validate(rho: np.ndarray) -> ValidityReport:
    """Report how far ``rho`` is from a valid density matrix.

    For a stack of matrices the worst defect over the stack is reported.
    """
    rho = np.asarray(rho)
    if rho.shape[-2:] not in ((2, 2), (4, 4)):
        raise DimensionError(f"expected a 2x2 or 4x4 matrix, got {rho.shape}")
    herm = hermiticity_defect(rho)
    trace = np.trace(rho, axis1=-2, axis2=-1)
    trace_defect = float(np.max(np.abs(trace - 1.0)))
    sym = 0.5 * (rho + np.swapaxes(rho, -1, -2).conj())
    min_eig = float(np.min(hermitian_eig(sym).eigenvalues[..., -1]))
    return ValidityReport(herm, trace_defect, min_eig)


def require_state(rho: np.ndarray, shape=(4, 4)) -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a valid state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != shape:
        raise DimensionError(f"expected {shape} density matrix, got {rho.shape}")
    report = validate(rho)
    if not report.ok:
        raise ContractViolation("invalid density matrix: " + "; ".join(report.flags()))
    return rho


def psi_vector(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), 0.0, 0.0, math.sin(theta)], dtype=complex)


def pure_psi(theta: float) -> np.ndarray:
    """Projector onto ``cos(theta)|HH> + sin(theta)|VV>``."""
    check_theta(theta)
    v = psi_vector(theta)
    return np.outer(v, v.conj())


def target_state(alpha: float, theta: float) -> np.ndarray:
    """The family member rho(alpha, theta)."""
    check_alpha(alpha)
    proj = pure_psi(theta)
    rho_b = partial_trace(proj, "B")
    return alpha * proj + (1.0 - alpha) * kron(I2 / 2, rho_b)


def construct_tau1(rho: np.ndarray, mu1: float = MU_DEFAULT) -> np.ndarray:
    """Mix ``rho`` with ``rho_A (x) I/2``; entangled output witnesses B -> A steering."""
    check_mu(mu1, "mu1")
    rho = np.asarray(rho, dtype=complex)
    rho_a = partial_trace(rho, "A")
    return mu1 * rho + (1.0 - mu1) * kron(rho_a, I2 / 2)


def construct_tau2(rho: np.ndarray, mu2: float = MU_DEFAULT) -> np.ndarray:
    """Mix ``rho`` with ``I/2 (x) rho_B``; entangled output witnesses A -> B steering."""
    check_mu(mu2, "mu2")
    rho = np.asarray(rho, dtype=complex)
    rho_b = partial_trace(rho, "B")
    return mu2 * rho + (1.0 - mu2) * kron(I2 / 2, rho_b)


def family_tau1(alpha: float, theta: float, mu1: float = MU_DEFAULT) -> np.ndarray:
    return construct_tau1(target_state(alpha, theta), mu1)


def family_tau2(alpha: float, theta: float, mu2: float = MU_DEFAULT) -> np.ndarray:
    return construct_tau2(target_state(alpha, theta), mu2)


def werner_state(visibility: float) -> np.ndarray:
    """``v |Phi+><Phi+| + (1 - v) I/4``."""
    phi = psi_vector(math.pi / 4)
    return visibility * np.outer(phi, phi.conj()) + (1.0 - visibility) * np.eye(4) / 4
