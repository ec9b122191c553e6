"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail
line per criterion.
"""

import functools
import itertools
import math
import time
from fractions import Fraction

import numpy as np

from polywh import (
    AlgebraParams,
    DomainError,
    EntireSeries,
    GrassmannElement,
    bg_grassmann_state,
    bg_normalization,
    bg_state,
    build_rep,
    build_truncated_rep,
    check_bg_eigen,
    check_bg_grassmann_eigen,
    classify,
    closed_form_growth,
    commutator_gap,
    complex_z_bg_residual,
    estimate_growth,
    moments_for,
    overlap,
    perelomov_state,
    perelomov_via_exponential,
    solve_measure,
    structure_function,
    time_evolve,
    verify_identity,
)

from oracles import (
    glauber_overlap,
    inverse_square_factorial_sum,
    random_finite_params,
    random_infinite_params,
    random_z,
)


def criterion(num, desc):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\n[criterion {num:2d}] FAIL - {desc}")
                raise
            print(f"\n[criterion {num:2d}] PASS - {desc}")

        return wrapper

    return deco


def _f_scale(params, window):
    return max(1.0, max(abs(float(structure_function(params, n))) for n in range(window + 1)))


@criterion(1, "operator identities on 50 randomized parameter sets, 1e-12, < 1 s")
def test_criterion_01_operator_identities():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for i in range(50):
        if i % 2 == 0:
            params = random_finite_params(rng, phi_scale=math.pi)
            window = classify(params).d
        else:
            params = random_infinite_params(rng, phi_scale=math.pi)
            window = 40
        rep = build_rep(params, window)
        tol = 1e-12 * _f_scale(params, window)
        f = np.array([float(structure_function(params, n)) for n in range(window)])
        assert np.max(np.abs(rep.raising @ rep.lowering - np.diag(f))) <= tol
        comm = rep.lowering @ rep.raising - rep.raising @ rep.lowering
        for n in range(window - 1):
            assert abs(comm[n, n] - float(commutator_gap(params, n))) <= tol
        off = comm - np.diag(np.diag(comm))
        assert np.max(np.abs(off)) <= tol
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.3f} s"


@criterion(2, "exact nilpotency and top-level annihilation, all finite d <= 12, < 0.1 s")
def test_criterion_02_nilpotency():
    start = time.perf_counter()
    extras = [(), (Fraction(1, 2),), (Fraction(1, 2), Fraction(2))]
    for d in range(2, 13):
        for extra in extras:
            params = AlgebraParams((Fraction(-1, d - 1),) + extra, 0.37)
            rep = build_rep(params)
            assert np.all(np.linalg.matrix_power(rep.lowering, d) == 0)
            assert np.all(np.linalg.matrix_power(rep.raising, d) == 0)
            top = np.zeros(d, dtype=complex)
            top[d - 1] = 1.0
            assert np.all(rep.raising @ top == 0)
    elapsed = time.perf_counter() - start
    assert elapsed < 0.1, f"took {elapsed:.3f} s"


@criterion(3, "truncated commutator identity, 20 random (params, s), 1e-12")
def test_criterion_03_truncated_algebra():
    rng = np.random.default_rng(103)
    for _ in range(20):
        params = random_infinite_params(rng, phi_scale=math.pi)
        s = int(rng.integers(1, 11))
        window = s + int(rng.integers(2, 9))
        rep = build_truncated_rep(params, window, s)
        comm = rep.lowering @ rep.raising - rep.raising @ rep.lowering
        expected = np.zeros((window, window), dtype=complex)
        for n in range(s):
            expected[n, n] = float(commutator_gap(params, n))
        expected[s - 1, s - 1] -= float(structure_function(params, s))
        tol = 1e-12 * _f_scale(params, s + 1)
        assert np.max(np.abs(comm - expected)) <= tol


@criterion(4, "perelomov series = nilpotent exponential (1e-10, 100 cases); gate 1000/1000")
def test_criterion_04_perelomov_equivalence_and_gate():
    rng = np.random.default_rng(104)
    for _ in range(100):
        params = random_finite_params(rng, phi_scale=math.pi)
        z = random_z(rng, radius=2.0)
        series = perelomov_state(params, z, normalize=True)
        nilpotent = perelomov_via_exponential(params, z, build_rep(params), normalize=True)
        assert np.max(np.abs(series.coeffs - nilpotent.coeffs)) <= 1e-10
        raw_a = perelomov_state(params, z)
        raw_b = perelomov_via_exponential(params, z, build_rep(params))
        assert abs(raw_a.norm() / raw_b.norm() - 1.0) <= 1e-10

    positive = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2))
    raised = 0
    for i in range(1000):
        if i % 2 == 0:
            r = int(rng.integers(2, 4))
            kappas = [positive[rng.integers(0, len(positive))] for _ in range(r)]
            params = AlgebraParams(kappas, float(rng.uniform(-1, 1)))
            z = random_z(rng, radius=3.0)
        else:
            k1 = positive[rng.integers(0, len(positive))]
            params = AlgebraParams([k1], float(rng.uniform(-1, 1)))
            radius = 1.0 / math.sqrt(float(k1))
            z = radius * float(rng.uniform(1.0, 3.0)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        try:
            perelomov_state(params, z)
        except DomainError:
            raised += 1
    assert raised == 1000


@criterion(5, "lowering-eigenstate residual <= 1e-10, 100 random infinite cases")
def test_criterion_05_bg_eigenvalue():
    rng = np.random.default_rng(105)
    for _ in range(100):
        params = random_infinite_params(rng, phi_scale=math.pi)
        state = bg_state(params, random_z(rng, radius=3.0), tail_tol=1e-14)
        rep = build_rep(params, window=len(state) + 1)
        assert check_bg_eigen(state, rep) <= 1e-10


@criterion(6, "nilpotent-variable eigenstates: d=2 exact, residual <= 1e-12, no complex-z states")
def test_criterion_06_grassmann_states():
    phi = 0.83
    state2 = bg_grassmann_state(AlgebraParams([-1], phi))
    assert state2.coeffs[0] == GrassmannElement.one(2)
    assert state2.coeffs[1] == GrassmannElement(2, (0j, complex(np.exp(-1j * phi))))

    rng = np.random.default_rng(106)
    for d in range(2, 13):
        params = AlgebraParams([Fraction(-1, d - 1)], float(rng.uniform(-math.pi, math.pi)))
        assert check_bg_grassmann_eigen(bg_grassmann_state(params), build_rep(params)) <= 1e-12
    for _ in range(20):
        params = random_finite_params(rng, phi_scale=math.pi)
        assert check_bg_grassmann_eigen(bg_grassmann_state(params), build_rep(params)) <= 1e-12

    for d in range(2, 13):
        params = AlgebraParams([Fraction(-1, d - 1)], 0.21)
        z = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))  # |z| = 1
        assert complex_z_bg_residual(params, z) > 1e-3


@criterion(7, "temporal stability: evolved state = rebuilt state at phi + t, 1e-12, 100 cases")
def test_criterion_07_temporal_stability():
    rng = np.random.default_rng(107)
    for i in range(100):
        t = float(rng.uniform(-1.5, 1.5))
        if i % 2 == 0:
            params = random_finite_params(rng)
            z = random_z(rng, radius=1.5)
            state = perelomov_state(params, z)
            rebuilt = perelomov_state(params.with_phi(params.phi + t), z)
        else:
            params = random_infinite_params(rng)
            z = random_z(rng, radius=2.0)
            state = bg_state(params, z)
            rebuilt = bg_state(params.with_phi(params.phi + t), z)
        evolved = time_evolve(state, t)
        scale = np.maximum(1.0, np.abs(rebuilt.coeffs))
        assert np.max(np.abs(evolved.coeffs - rebuilt.coeffs) / scale) <= 1e-12
        assert evolved.phi == rebuilt.phi


@criterion(8, "norm of the eigenstate matches the hypergeometric series, 1e-10 (oracle at 1e-8)")
def test_criterion_08_normalization():
    ell_sets = (
        [(ell,) for ell in (1, 2, 3, 4, 5)]
        + [(1, 1), (2, 5), (4, 4), (1, 5)]
        + [(1, 1, 1), (2, 3, 5), (5, 5, 5)]
    )
    for ells in ell_sets:
        params = AlgebraParams([Fraction(1, ell) for ell in ells], 0.3)
        for z in (0.4, 1 + 1j, 2.1 - 0.9j, 3.0):
            state = bg_state(params, z)
            assert abs(state.norm() - bg_normalization(params, z)) <= 1e-10

    value = bg_normalization(AlgebraParams([1]), 1.0) ** 2
    oracle = inverse_square_factorial_sum(1.0)
    assert abs(value - oracle) <= 1e-8
    assert abs(oracle - 2.2795853023360673) < 1e-12


@criterion(9, "overcompleteness: identity deviation <= 1e-8; kappa = 0 rule = Gauss-Laguerre, < 5 s")
def test_criterion_09_overcompleteness():
    start = time.perf_counter()
    # finite-ladder exponential-type states: r = 1 for every d <= 10, plus
    # r = 2, 3 with reciprocal-integer extras (for larger extra kappas no
    # positive radial measure exists at all -- certified below)
    finite_sets = [(Fraction(-1, d - 1),) for d in range(2, 11)]
    finite_sets += [
        (Fraction(-1, 5), Fraction(1, 2)),
        (Fraction(-1, 9), Fraction(1, 3)),
        (Fraction(-1, 4), Fraction(1, 3), Fraction(1, 5)),
        (Fraction(-1, 9), Fraction(1, 3), Fraction(1, 5)),
    ]
    for kappas in finite_sets:
        params = AlgebraParams(kappas, 0.4)
        measure = solve_measure(moments_for(params, "perelomov"))
        assert verify_identity(params, "perelomov", measure) <= 1e-8

    # outside the reciprocal-integer family the moments can violate
    # Cauchy-Schwarz (m_0 m_2 < m_1^2): no positive measure matches them,
    # and the exact Hankel check certifies the obstruction
    blocked = AlgebraParams([Fraction(-1, 4), Fraction(1, 3), Fraction(2)])
    try:
        solve_measure(moments_for(blocked, "perelomov"))
        raise AssertionError("expected a positive-definiteness rejection")
    except DomainError as exc:
        assert "H_2" in str(exc)

    for ells in [(1,), (2,), (5,), (1, 2), (2, 5)]:
        params = AlgebraParams([Fraction(1, ell) for ell in ells])
        measure = solve_measure(moments_for(params, "barut-girardello", count=16))
        assert verify_identity(params, "barut-girardello", measure) <= 1e-8

    osc = AlgebraParams([0])
    measure = solve_measure(moments_for(osc, "barut-girardello", count=16))
    nodes, weights = np.polynomial.laguerre.laggauss(8)
    assert np.max(np.abs(measure.nodes - nodes)) <= 1e-9
    assert np.max(np.abs(measure.weights - weights)) <= 1e-9
    assert verify_identity(osc, "barut-girardello", measure) <= 1e-8

    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.3f} s"


@criterion(10, "growth estimator vs closed form (5% / 10% at N = 5000), monotone in r, < 10 s")
def test_criterion_10_growth_formulas():
    start = time.perf_counter()
    n_max = 5000
    fitted = {}
    for r in (1, 2, 3):
        for ells in itertools.combinations_with_replacement((1, 2, 5), r):
            params = AlgebraParams([Fraction(1, ell) for ell in ells])
            est = estimate_growth(EntireSeries.bg_kernel(params, n_max))
            rho, sigma = closed_form_growth(params)
            assert abs(est.rho_hat - rho) / rho <= 0.05, (ells, est.rho_hat, rho)
            assert abs(est.sigma_hat - sigma) / sigma <= 0.10, (ells, est.sigma_hat, sigma)
            fitted[ells] = est.rho_hat

    for ell in (1, 2, 5):
        assert fitted[(ell,)] > fitted[(ell, ell)] > fitted[(ell, ell, ell)]
    for r in (1, 2):  # closed form itself decreases in r
        rho_r = closed_form_growth(AlgebraParams([Fraction(1, 2)] * r))[0]
        rho_next = closed_form_growth(AlgebraParams([Fraction(1, 2)] * (r + 1)))[0]
        assert rho_next < rho_r

    assert abs(fitted[(1,)] - 1.0) <= 0.05  # (rho, sigma) = (1, 1) reference point
    est11 = estimate_growth(EntireSeries.bg_kernel(AlgebraParams([1]), n_max))
    assert abs(est11.sigma_hat - 1.0) <= 0.10

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.3f} s"


@criterion(11, "oscillator limits: ell = 10^6 matches Glauber to 1e-4; overlap closed form 1e-8")
def test_criterion_11_oscillator_limits():
    params = AlgebraParams([Fraction(1, 10**6)])
    z = 0.9 + 0.3j
    glauber = np.array([z**n / math.sqrt(math.factorial(n)) for n in range(11)])
    assert np.max(np.abs(perelomov_state(params, z).coeffs[:11] - glauber)) <= 1e-4
    assert np.max(np.abs(bg_state(params, z).coeffs[:11] - glauber)) <= 1e-4

    osc = AlgebraParams([0])
    for z1, z2 in [(0.9 + 0.4j, -0.5 + 1.1j), (0.0, 1.5), (2.0j, 2.0j)]:
        s1 = bg_state(osc, z1, normalize=True)
        s2 = bg_state(osc, z2, normalize=True)
        assert abs(overlap(s1, s2) - glauber_overlap(z1, z2)) <= 1e-8
