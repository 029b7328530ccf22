"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import math
import time

import numpy as np
import pytest

from oracles import concurrence_charpoly, random_mixed_pure, random_state, random_unitary
from steerwit.cli import scan_grid
from steerwit.linalg import kron, partial_trace, psd_sqrt
from steerwit.measures import concurrence, fidelity
from steerwit.states import MU_DEFAULT, construct_tau1, construct_tau2, target_state
from steerwit.steering import (
    Region,
    bell_geom,
    boundary_alice_to_bob,
    boundary_bob_to_alice,
    classify_region,
)
from steerwit.tomo import PoissonSampler, monte_carlo_errorbar

pytestmark = pytest.mark.acceptance

INV_SQRT3 = 1 / math.sqrt(3)


def bisect_alpha(construct, thetas, width=1e-10):
    """Vectorized bisection for the onset of C(construct(target(alpha, theta))) > 0."""
    thetas = np.asarray(thetas, dtype=float)
    lo = np.zeros_like(thetas)
    hi = np.ones_like(thetas)
    while np.max(hi - lo) > width:
        mid = 0.5 * (lo + hi)
        states = np.array([construct(target_state(a, t)) for a, t in zip(mid, thetas)])
        entangled = concurrence(states) > 0
        hi = np.where(entangled, mid, hi)
        lo = np.where(entangled, lo, mid)
    return 0.5 * (lo + hi)


def test_eq6_boundary_reproduction(report):
    start = time.perf_counter()
    thetas = [math.pi / 16, math.pi / 8, 3 * math.pi / 16, math.pi / 4]
    roots = bisect_alpha(lambda r: construct_tau1(r, MU_DEFAULT), thetas)
    closed = np.array([boundary_bob_to_alice(t) for t in thetas])
    err = float(np.max(np.abs(roots - closed)))
    corner = max(abs(roots[-1] - INV_SQRT3), abs(closed[-1] - INV_SQRT3))
    elapsed = time.perf_counter() - start
    ok = err < 1e-6 and corner < 1e-9 and elapsed < 1.0
    report("Eq.6 boundary reproduction", ok,
           f"max|root-closed|={err:.2e} (<1e-6), |x-1/sqrt3| at pi/4={corner:.2e} (<1e-9), {elapsed:.2f}s (<1s)")
    assert err < 1e-6
    assert corner < 1e-9
    assert elapsed < 1.0


def test_alice_to_bob_threshold(report):
    start = time.perf_counter()
    thetas = np.linspace(math.pi / 40, math.pi / 4, 10)
    roots = bisect_alpha(lambda r: construct_tau2(r, MU_DEFAULT), thetas)
    err = float(np.max(np.abs(roots - boundary_alice_to_bob())))
    elapsed = time.perf_counter() - start
    report("Alice->Bob threshold 1/sqrt3", err < 1e-6 and elapsed < 1.0,
           f"max|root-1/sqrt3| over 10 thetas={err:.2e} (<1e-6), {elapsed:.2f}s (<1s)")
    assert err < 1e-6
    assert elapsed < 1.0


def test_werner_bell_geom_thresholds(report):
    start = time.perf_counter()
    verdicts = {}
    worst = 0.0
    for alpha in (0.49, 0.50, 0.51):
        res = bell_geom(target_state(alpha, math.pi / 4))
        worst = max(worst, abs(res.lhs - alpha), abs(res.rhs - 2 * alpha * alpha))
        verdicts[alpha] = res.violated
    elapsed = time.perf_counter() - start
    expected = {0.49: False, 0.50: False, 0.51: True}
    ok = verdicts == expected and worst < 1e-9 and elapsed < 0.1
    report("Werner Bell-geom thresholds", ok,
           f"violated={verdicts}, max lhs/rhs error={worst:.2e} (<1e-9), {elapsed:.3f}s (<0.1s)")
    assert verdicts == expected
    assert worst < 1e-9
    assert elapsed < 0.1


def test_fig2_region_consistency(report):
    start = time.perf_counter()
    alphas, thetas = scan_grid(101)
    points = [(a, t) for a in alphas for t in thetas]
    targets = np.array([target_state(a, t) for a, t in points])
    c1 = concurrence(construct_tau1(targets, MU_DEFAULT))
    c2 = concurrence(construct_tau2(targets, MU_DEFAULT))
    checked = disagreements = 0
    for (a, t), x1, x2 in zip(points, c1, c2):
        if abs(a - boundary_alice_to_bob()) <= 1e-6 or abs(a - boundary_bob_to_alice(t)) <= 1e-6:
            continue
        checked += 1
        a_to_b = x2 > 1e-9
        b_to_a = x1 > 1e-9
        if a_to_b and b_to_a:
            expected = Region.BOTH_WAY
        elif a_to_b:
            expected = Region.ONE_WAY_A_TO_B
        elif b_to_a:
            expected = Region.ONE_WAY_B_TO_A
        else:
            expected = Region.NEITHER
        if classify_region(a, t) is not expected:
            disagreements += 1
    elapsed = time.perf_counter() - start
    report("Fig.2 region consistency (101x101)", disagreements == 0 and elapsed < 10,
           f"{disagreements} disagreements over {checked} off-boundary points, {elapsed:.2f}s (<10s)")
    assert checked > 10_000 - 300
    assert disagreements == 0
    assert elapsed < 10


def test_concurrence_oracle_equivalence(report):
    rng = np.random.default_rng(7)
    states = np.array([random_mixed_pure(rng) if k % 2 else random_state(rng) for k in range(1000)])
    start = time.perf_counter()
    fast = concurrence(states)
    oracle = np.array([concurrence_charpoly(s) for s in states])
    elapsed = time.perf_counter() - start
    dev = float(np.max(np.abs(fast - oracle)))
    report("Concurrence oracle equivalence", dev < 1e-8 and elapsed < 5,
           f"max|hermitian-charpoly| over 1000 states={dev:.2e} (<1e-8), "
           f"{np.mean(fast > 0):.0%} entangled, {elapsed:.2f}s (<5s)")
    assert dev < 1e-8
    assert elapsed < 5


def test_tomography_fidelity_analogue(report):
    start = time.perf_counter()
    target = target_state(0.9, math.pi / 4)
    states = {"target": target, "tau1": construct_tau1(target), "tau2": construct_tau2(target)}
    means = {}
    monotone = {}
    for name, rho in states.items():
        means[name] = monte_carlo_errorbar(rho, 10_000, 100, "fidelity", 42)[0]
        stds = [monte_carlo_errorbar(rho, shots, 100, "fidelity", 42)[1] for shots in (100, 1000, 10_000)]
        monotone[name] = stds[0] > stds[1] > stds[2]
    elapsed = time.perf_counter() - start
    ok = min(means.values()) >= 0.99 and all(monotone.values()) and elapsed < 60
    report("Tomography fidelity analogue", ok,
           "mean fidelity " + ", ".join(f"{k}={v:.5f}" for k, v in means.items())
           + f" (>=0.99), stddev decreasing={all(monotone.values())}, {elapsed:.2f}s (<60s)")
    assert min(means.values()) >= 0.99
    assert all(monotone.values())
    assert elapsed < 60


def test_invariant_suites(report):
    rng = np.random.default_rng(11)
    start = time.perf_counter()
    results = {}

    states = np.array([random_state(rng, rank=int(rng.integers(1, 5))) for _ in range(1000)])
    ptr = max(float(np.max(np.abs(np.trace(partial_trace(states, k), axis1=1, axis2=2) - 1))) for k in "AB")
    results["partial-trace trace"] = (ptr, 1e-12)

    psd = np.array([random_state(rng, rank=int(rng.integers(1, 5))) * rng.uniform(0.1, 3) for _ in range(1000)])
    root = psd_sqrt(psd)
    results["psd_sqrt round trip"] = (float(np.max(np.abs(root @ root - psd))), 1e-10)

    lu = 0.0
    for _ in range(200):
        rho = random_mixed_pure(rng)
        u = kron(random_unitary(rng), random_unitary(rng))
        lu = max(lu, abs(concurrence(u @ rho @ u.conj().T) - concurrence(rho)))
    results["concurrence local-unitary invariance"] = (lu, 1e-9)

    a = np.array([random_state(rng, rank=int(rng.integers(1, 5))) for _ in range(300)])
    b = np.array([random_state(rng, rank=int(rng.integers(1, 5))) for _ in range(300)])
    fab, fba, faa = fidelity(a, b), fidelity(b, a), fidelity(a, a)
    results["fidelity symmetry"] = (float(np.max(np.abs(fab - fba))), 1e-10)
    results["fidelity self"] = (float(np.max(np.abs(faa - 1))), 1e-12)
    results["fidelity upper bound excess"] = (max(0.0, float(np.max(fab)) - 1), 1e-10)
    results["fidelity lower bound excess"] = (max(0.0, -float(np.min(fab))), 1e-10)

    draws = PoissonSampler(2024).draws(np.full(100_000, 7.3))
    results["Poisson mean rel. error"] = (abs(draws.mean() - 7.3) / 7.3, 0.01)
    results["Poisson variance rel. error"] = (abs(draws.var() - 7.3) / 7.3, 0.05)

    elapsed = time.perf_counter() - start
    failed = [k for k, (v, tol) in results.items() if not v < tol]
    detail = "; ".join(f"{k}={v:.1e}(<{tol:g})" for k, (v, tol) in results.items())
    report("Invariant suites", not failed and elapsed < 30, f"{detail}; {elapsed:.2f}s (<30s)")
    assert not failed, failed
    assert elapsed < 30
