"""Simulated two-qubit polarization tomography with Poissonian counts.

Each qubit is projected onto one of six polarization states; all 36 pairs are
measured. Counts for a setting are Poisson with mean ``shots * p`` where
``p = Tr[rho (P_a x P_b)]``. Reconstruction is linear inversion of the Pauli
expectations followed by a Frobenius projection onto the set of density
matrices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDataError, DimensionError, ParameterError
from .linalg import I2, PAULIS, hermitian_eig, kron
from .measures import concurrence, fidelity
from .states import require_state
from .steering import bell_geom

_S = 1.0 / math.sqrt(2.0)
KETS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([_S, _S], dtype=complex),
    "A": np.array([_S, -_S], dtype=complex),
    "R": np.array([_S, 1j * _S], dtype=complex),
    "L": np.array([_S, -1j * _S], dtype=complex),
}
# (+1 eigenstate, -1 eigenstate) of sigma_x, sigma_y, sigma_z
PAULI_EIGENSTATES = (("D", "A"), ("R", "L"), ("H", "V"))
LABELS = "HVDARL"
SETTINGS = tuple(a + b for a, b in itertools.product(LABELS, repeat=2))
SETTING_INDEX = {s: k for k, s in enumerate(SETTINGS)}

INVERSION_CUTOFF = 30.0
STATISTICS = ("fidelity", "concurrence", "bell-geom-lhs", "bell-geom-rhs")


def projector(label: str) -> np.ndarray:
    k = KETS[label]
    return np.outer(k, k.conj())


SETTING_PROJECTORS = np.array([kron(projector(s[0]), projector(s[1])) for s in SETTINGS])


class PoissonSampler:
    """Seeded Poisson sampler on top of a PCG64 uniform stream.

    Means below ``INVERSION_CUTOFF`` use sequential CDF inversion; larger
    means use Hoermann's transformed rejection with squeeze (PTRS). Both
    consume only ``Generator.random()`` so a given seed always produces the
    same counts.
    """

    def __init__(self, seed):
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def draw(self, mean: float) -> int:
        if mean < 0 or not math.isfinite(mean):
            raise ParameterError(f"Poisson mean must be finite and >= 0, got {mean!r}")
        if mean == 0:
            return 0
        if mean < INVERSION_CUTOFF:
            return self._inversion(mean)
        return self._ptrs(mean)

    def draws(self, means) -> np.ndarray:
        return np.array([self.draw(float(m)) for m in np.ravel(means)], dtype=np.int64)

    def _inversion(self, mean):
        u = self.rng.random()
        p = math.exp(-mean)
        cdf = p
        k = 0
        while u > cdf:
            k += 1
            p *= mean / k
            cdf += p
            if p < 1e-300 and k > mean:
                break
        return k

    def _ptrs(self, mean):
        slam = math.sqrt(mean)
        loglam = math.log(mean)
        b = 0.931 + 2.53 * slam
        a = -0.059 + 0.02483 * b
        inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
        vr = 0.9277 - 3.6224 / (b - 2)
        while True:
            u = self.rng.random() - 0.5
            v = self.rng.random()
            us = 0.5 - abs(u)
            k = math.floor((2 * a / us + b) * u + mean + 0.43)
            if us >= 0.07 and v <= vr:
                return k
            if k < 0 or (us < 0.013 and v > us):
                continue
            if (math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)
                    <= -mean + k * loglam - math.lgamma(k + 1)):
                return k


def setting_probabilities(rho) -> np.ndarray:
    """Outcome probability for each of the 36 settings, in ``SETTINGS`` order."""
    rho = np.asarray(rho, dtype=complex)
    p = np.einsum("sij,ji->s", SETTING_PROJECTORS, rho).real
    return np.clip(p, 0.0, None)


def simulate_counts(rho, shots: int, seed) -> np.ndarray:
    """Poisson counts for the 36 settings; deterministic for a given seed."""
    if shots < 1:
        raise ParameterError(f"shots must be >= 1, got {shots}")
    rho = require_state(rho)
    return PoissonSampler(seed).draws(shots * setting_probabilities(rho))


def pauli_expectations(counts) -> np.ndarray:
    """4x4 table ``E[i, j] = <s_i x s_j>`` (index 0 is the identity) from counts.

    Each correlator uses the four settings built from the eigenstates of its
    Pauli pair, normalized by their total. Single-qubit terms are averaged
    over the three groups that contain them.
    """
    counts = np.asarray(counts, dtype=float)
    if counts.shape != (len(SETTINGS),):
        raise DimensionError(f"expected {len(SETTINGS)} counts, got {counts.shape}")
    if np.any(counts < 0):
        raise ParameterError("counts must be nonnegative")
    e = np.zeros((4, 4))
    e[0, 0] = 1.0
    for i, (pa, ma) in enumerate(PAULI_EIGENSTATES, start=1):
        for j, (pb, mb) in enumerate(PAULI_EIGENSTATES, start=1):
            n = np.array([
                [counts[SETTING_INDEX[pa + pb]], counts[SETTING_INDEX[pa + mb]]],
                [counts[SETTING_INDEX[ma + pb]], counts[SETTING_INDEX[ma + mb]]],
            ])
            total = n.sum()
            if total <= 0:
                raise DegenerateDataError(f"no counts in the sigma_{i}/sigma_{j} group")
            e[i, j] = (n[0, 0] - n[0, 1] - n[1, 0] + n[1, 1]) / total
            e[i, 0] += (n[0].sum() - n[1].sum()) / total / 3.0
            e[0, j] += (n[:, 0].sum() - n[:, 1].sum()) / total / 3.0
    return e


_BASIS = (I2,) + PAULIS
_PAULI_PRODUCTS = np.array([[kron(a, b) for b in _BASIS] for a in _BASIS])


def linear_inversion(counts) -> np.ndarray:
    """``(1/4) sum_ij E_ij s_i x s_j``; Hermitian with unit trace, maybe not PSD."""
    e = pauli_expectations(counts)
    return np.einsum("ij,ijkl->kl", e, _PAULI_PRODUCTS) / 4.0


def project_simplex(values) -> np.ndarray:
    """Euclidean projection of each row of ``values`` onto the probability simplex."""
    v = np.atleast_2d(np.asarray(values, dtype=float))
    n = v.shape[-1]
    u = -np.sort(-v, axis=-1)
    css = np.cumsum(u, axis=-1) - 1.0
    ks = np.arange(1, n + 1)
    cond = u - css / ks > 0
    rho_idx = n - 1 - np.argmax(cond[..., ::-1], axis=-1)
    shift = css[np.arange(v.shape[0]), rho_idx] / (rho_idx + 1)
    out = np.clip(v - shift[:, None], 0.0, None)
    return out.reshape(np.shape(values))


def project_to_state(m) -> np.ndarray:
    """Closest unit-trace PSD matrix to Hermitian ``m`` in Frobenius norm."""
    m = np.asarray(m, dtype=complex)
    m = 0.5 * (m + np.swapaxes(m, -1, -2).conj())
    w, v = hermitian_eig(m)
    w = project_simplex(w)
    out = (v * w[..., None, :]) @ np.swapaxes(v, -1, -2).conj()
    return 0.5 * (out + np.swapaxes(out, -1, -2).conj())


def reconstruct(counts, shots=None) -> np.ndarray:
    """Density matrix estimate from 36 setting counts.

    ``shots`` is accepted for interface symmetry; per-group normalization
    makes the estimate independent of the absolute count scale.
    """
    return project_to_state(linear_inversion(counts))


def _statistic(name, estimate, rho):
    if name == "fidelity":
        return fidelity(estimate, rho)
    if name == "concurrence":
        return concurrence(estimate)
    if name == "bell-geom-lhs":
        return bell_geom(estimate).lhs
    if name == "bell-geom-rhs":
        return bell_geom(estimate).rhs
    raise ParameterError(f"unknown statistic {name!r}; choose from {STATISTICS}")


def trial_seeds(seed, trials: int):
    """Per-trial child seeds split deterministically from ``seed``."""
    return np.random.SeedSequence(seed).spawn(trials)


def sample_reconstructions(rho, shots: int, trials: int, seed) -> np.ndarray:
    """Stack of ``trials`` reconstructed states, one per derived seed."""
    rho = require_state(rho)
    probs = setting_probabilities(rho)
    raw = [linear_inversion(PoissonSampler(s).draws(shots * probs)) for s in trial_seeds(seed, trials)]
    return project_to_state(np.array(raw))


def trial_statistics(rho, shots: int, trials: int, statistic: str, seed) -> np.ndarray:
    if statistic not in STATISTICS:
        raise ParameterError(f"unknown statistic {statistic!r}; choose from {STATISTICS}")
    if shots < 1:
        raise ParameterError(f"shots must be >= 1, got {shots}")
    estimates = sample_reconstructions(rho, shots, trials, seed)
    if statistic in ("fidelity", "concurrence"):
        return np.atleast_1d(_statistic(statistic, estimates, np.broadcast_to(rho, estimates.shape)))
    return np.array([_statistic(statistic, est, rho) for est in estimates])


def monte_carlo_errorbar(rho, shots: int, trials: int, statistic: str = "fidelity", seed=0) -> tuple[float, float]:
    """Sample mean and standard deviation of ``statistic`` over simulated runs.

    ``fidelity`` is taken against ``rho`` itself. The standard deviation uses
    ``ddof=1``, so at least two trials are required.
    """
    if trials < 2:
        raise ParameterError(f"trials must be >= 2 for a standard deviation, got {trials}")
    values = trial_statistics(rho, shots, trials, statistic, seed)
    return float(np.mean(values)), float(np.std(values, ddof=1))


@dataclass
class TomographyRun:
    """One simulated acquisition plus Monte-Carlo error bars around it."""

    shots_per_setting: int
    seed: int
    counts: np.ndarray
    reconstructed: np.ndarray
    fid: float
    fid_stderr: float
    settings: tuple = field(default=SETTINGS)


def run_tomography(rho, shots: int = 10_000, trials: int = 100, seed: int = 0) -> TomographyRun:
    """Simulate one acquisition of ``rho`` and estimate its fidelity error bar.

    The single acquisition uses the first derived seed; the error bar is the
    spread over ``trials`` independent acquisitions (that one included).
    """
    rho = require_state(rho)
    if trials < 2:
        raise ParameterError(f"trials must be >= 2 for a standard deviation, got {trials}")
    first = trial_seeds(seed, 1)[0]
    counts = PoissonSampler(first).draws(shots * setting_probabilities(rho))
    est = reconstruct(counts, shots)
    fids = trial_statistics(rho, shots, trials, "fidelity", seed)
    return TomographyRun(shots, seed, counts, est, float(fidelity(est, rho)), float(np.std(fids, ddof=1)))
