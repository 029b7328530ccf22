"""Steering decisions for the target family.

Two independent routes are kept side by side: the witness route computes the
concurrence of the constructed states numerically, the analytic route
compares ``alpha`` with closed-form thresholds. :func:`classify_region` uses
the analytic route; :func:`witness_steering` works for any two-qubit state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import max_singular_value_3x3
from .measures import concurrence, correlation_matrix
from .states import (
    MU_DEFAULT,
    check_alpha,
    check_mu,
    check_theta,
    construct_tau1,
    construct_tau2,
    require_state,
)
from .errors import ParameterError

WITNESS_TOL = 1e-9
BELL_TOL = 1e-9
ALICE_TO_BOB_THRESHOLD = 1.0 / math.sqrt(3.0)


class Witness(str, enum.Enum):
    WITNESSED = "witnessed"
    UNDETERMINED = "undetermined"


class Region(str, enum.Enum):
    NEITHER = "neither-witnessed"
    ONE_WAY_A_TO_B = "one-way-A-to-B"
    # never produced for the target family; reachable for general states
    ONE_WAY_B_TO_A = "one-way-B-to-A"
    BOTH_WAY = "both-way"


def _region(a_to_b: bool, b_to_a: bool) -> Region:
    if a_to_b and b_to_a:
        return Region.BOTH_WAY
    if a_to_b:
        return Region.ONE_WAY_A_TO_B
    if b_to_a:
        return Region.ONE_WAY_B_TO_A
    return Region.NEITHER


@dataclass(frozen=True)
class SteeringVerdict:
    """Outcome of the entanglement-based steering witness.

    The witness is one-sided: a separable constructed state leaves the
    corresponding direction ``UNDETERMINED``, it does not prove the state
    unsteerable.
    """

    c_tau1: float
    c_tau2: float

    @property
    def bob_steers_alice(self) -> Witness:
        return Witness.WITNESSED if self.c_tau1 > WITNESS_TOL else Witness.UNDETERMINED

    @property
    def alice_steers_bob(self) -> Witness:
        return Witness.WITNESSED if self.c_tau2 > WITNESS_TOL else Witness.UNDETERMINED

    @property
    def region(self) -> Region:
        return _region(
            self.alice_steers_bob is Witness.WITNESSED,
            self.bob_steers_alice is Witness.WITNESSED,
        )


@dataclass(frozen=True)
class BellGeomResult:
    lhs: float
    rhs: float

    @property
    def violated(self) -> bool:
        return self.lhs < self.rhs - BELL_TOL


def witness_steering(rho, mu1: float = MU_DEFAULT, mu2: float = MU_DEFAULT) -> SteeringVerdict:
    """Build both constructed states from ``rho`` and test them for entanglement."""
    rho = require_state(rho)
    c1 = concurrence(construct_tau1(rho, mu1))
    c2 = concurrence(construct_tau2(rho, mu2))
    return SteeringVerdict(float(c1), float(c2))


def boundary_bob_to_alice(theta: float) -> float:
    """Smallest ``alpha`` (exclusive) at which tau1 of rho(alpha, theta) is entangled.

    Closed form for ``mu1 = 1/sqrt(3)``. At ``theta = 0`` the expression
    evaluates to its limit 1, i.e. nothing is witnessed.
    """
    check_theta(theta)
    c = math.cos(4.0 * theta)
    s3 = math.sqrt(3.0)
    return (s3 - s3 * c - 2.0 * math.sqrt(7.0 - 4.0 * c + c * c)) / (c - 5.0)


def boundary_alice_to_bob() -> float:
    """``alpha`` threshold for tau2 entanglement at ``mu2 = 1/sqrt(3)``; independent of theta."""
    return ALICE_TO_BOB_THRESHOLD


def one_way_band(theta: float) -> tuple[float, float]:
    """``(lower, upper)`` alpha interval where only Alice -> Bob is witnessed.

    The band is ``lower < alpha <= upper``; it is empty when ``upper <= lower``.
    """
    if not 0.0 < theta < math.pi / 4:
        raise ParameterError(f"theta={theta!r} must lie in the open interval (0, pi/4)")
    return boundary_alice_to_bob(), boundary_bob_to_alice(theta)


def tau2_threshold(mu2: float = MU_DEFAULT) -> float:
    """``alpha`` threshold for tau2 entanglement at arbitrary ``mu2`` (theta > 0).

    tau2 of the family is an X state with coherence ``mu2 alpha c s`` and
    off-diagonal populations whose geometric mean is ``(1 - mu2 alpha) c s / 2``,
    so entanglement starts at ``alpha = 1 / (3 mu2)``.
    """
    check_mu(mu2, "mu2")
    return math.inf if mu2 == 0 else 1.0 / (3.0 * mu2)


def tau1_threshold(theta: float, mu1: float = MU_DEFAULT) -> float:
    """``alpha`` threshold for tau1 entanglement at arbitrary ``mu1``.

    Solves ``(mu1 alpha sin(2 theta))^2 = 16 tau_HV tau_VH`` for the family's
    X-shaped tau1; returns ``inf`` when no entangled ``alpha`` exists.
    """
    check_theta(theta)
    check_mu(mu1, "mu1")
    c2 = math.cos(2.0 * theta)
    mu = mu1
    # 4 tau_HV = a0 + a1 alpha, 4 tau_VH = b0 + b1 alpha
    a0 = mu * (1 - c2) + (1 - mu)
    a1 = -mu * (1 - c2) + (1 - mu) * c2
    b0 = mu * (1 + c2) + (1 - mu)
    b1 = -mu * (1 + c2) - (1 - mu) * c2
    coeffs = [4 * mu * mu * (1 - c2 * c2) - a1 * b1, -(a0 * b1 + a1 * b0), -a0 * b0]

    def f(x):
        return np.polyval(coeffs, x)

    for r in sorted(np.roots(coeffs)):
        if abs(r.imag) < 1e-12 and r.real > 0 and f(r.real + 1e-7) > 0:
            return float(r.real)
    return math.inf


def witness_thresholds(theta: float, mu1: float = MU_DEFAULT, mu2: float = MU_DEFAULT) -> tuple[float, float]:
    """``(alice_to_bob, bob_to_alice)`` alpha thresholds for the family at ``theta``.

    Uses the closed forms at the default weights and the general solutions
    otherwise. At ``theta = 0`` the family is classically correlated: the
    Alice -> Bob threshold is ``inf`` and Bob -> Alice takes the limit value 1.
    """
    check_theta(theta)
    if theta <= 0.0:
        return math.inf, 1.0
    if mu1 == MU_DEFAULT and mu2 == MU_DEFAULT:
        return boundary_alice_to_bob(), boundary_bob_to_alice(theta)
    return tau2_threshold(mu2), tau1_threshold(theta, mu1)


def classify_region(alpha: float, theta: float, mu1: float = MU_DEFAULT, mu2: float = MU_DEFAULT) -> Region:
    """Region of the (alpha, theta) plane according to the analytic thresholds.

    Thresholds are strict: ``alpha`` exactly on a boundary is not witnessed.
    """
    check_alpha(alpha)
    a_to_b, b_to_a = witness_thresholds(theta, mu1, mu2)
    return _region(alpha > a_to_b, alpha > b_to_a)


def infinite_setting_a_to_b_only(alpha: float, theta: float) -> bool:
    """Sufficient condition (uniform LHS ansatz) for Bob being unable to steer Alice.

    ``cos^2(2 theta) >= (2 alpha - 1) / ((2 - alpha) alpha^3)``, evaluated with
    the denominator cleared so that ``alpha = 0`` is safe.
    """
    check_alpha(alpha)
    check_theta(theta)
    return math.cos(2.0 * theta) ** 2 * (2.0 - alpha) * alpha**3 >= 2.0 * alpha - 1.0


def bell_geom(rho) -> BellGeomResult:
    """Both sides of ``max_{m,n} sum T_ij m_i n_j >= 2 sum T_ij^2 / 3``.

    The left side is the largest singular value of the correlation matrix;
    ``violated`` means the inequality fails, which certifies steering.
    """
    t = correlation_matrix(require_state(rho))
    return BellGeomResult(max_singular_value_3x3(t), 2.0 * float(np.sum(t * t)) / 3.0)
