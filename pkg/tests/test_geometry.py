"""Fubini-Study distances, entanglement measure, and Berry holonomy."""

import cmath
import math

import numpy as np
import pytest

from holoqsim import (
    Circuit,
    GateSpec,
    HoloState,
    ProductState,
    StateLoop,
    berry_holonomy,
    bloch_circle_loop,
    encode_state,
    entanglement_measure,
    fidelity,
    fubini_study_distance,
    is_separable,
    maximize_product_overlap,
    run_circuit_holo,
    schmidt_oracle,
)

from _support import random_state_vector

PI = math.pi
SQ2 = math.sqrt(2.0)


def bell_state():
    return encode_state(np.array([1, 0, 0, 1], dtype=complex) / SQ2)


def ghz_state(n=3):
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = v[-1] = 1 / SQ2
    return encode_state(v)


# -- distances --------------------------------------------------------


def test_fidelity_self_and_orthogonal():
    psi = encode_state(np.array([1.0, 0.0]))
    phi = encode_state(np.array([0.0, 1.0]))
    assert fidelity(psi, psi) == pytest.approx(1.0, abs=1e-15)
    assert fidelity(psi, phi) == 0.0


def test_fidelity_rejects_unnormalized():
    bad = HoloState(1, {"0": 0.5})
    good = encode_state(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        fidelity(bad, good)


def test_fs_distance_range_and_examples():
    psi = encode_state(np.array([1.0, 0.0]))
    phi = encode_state(np.array([0.0, 1.0]))
    plus = encode_state(np.array([1.0, 1.0]) / SQ2)
    assert fubini_study_distance(psi, psi) == 0.0
    assert fubini_study_distance(psi, phi) == pytest.approx(PI / 2, abs=1e-12)
    assert fubini_study_distance(psi, plus) == pytest.approx(PI / 4, abs=1e-12)


def test_fs_distance_global_phase_invariant():
    rng = np.random.default_rng(1)
    v = random_state_vector(rng, 2)
    psi = encode_state(v)
    phi = encode_state(np.exp(0.73j) * v)
    assert fubini_study_distance(psi, phi) == 0.0  # snapped exact zero


def test_fs_distance_triangle_inequality():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a = encode_state(random_state_vector(rng, 2))
        b = encode_state(random_state_vector(rng, 2))
        c = encode_state(random_state_vector(rng, 2))
        dab = fubini_study_distance(a, b)
        dbc = fubini_study_distance(b, c)
        dac = fubini_study_distance(a, c)
        assert dac <= dab + dbc + 1e-9


# -- product states ---------------------------------------------------


def test_product_state_amplitudes():
    p = ProductState((np.array([1.0, 0.0]), np.array([0.0, 1.0])))
    assert p.to_state().amplitudes == {"01": 1.0 + 0j}


def test_product_state_rejects_unnormalized_factor():
    with pytest.raises(ValueError):
        ProductState((np.array([1.0, 1.0]),))


# -- entanglement measure ---------------------------------------------


def test_measure_zero_on_basis_product():
    assert entanglement_measure(encode_state(np.array([0, 1, 0, 0], dtype=complex))) \
        <= 1e-8


def test_measure_zero_on_random_products():
    rng = np.random.default_rng(5)
    for _ in range(10):
        f1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        f2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = np.kron(f1 / np.linalg.norm(f1), f2 / np.linalg.norm(f2))
        assert entanglement_measure(encode_state(v)) <= 1e-8


def test_measure_bell_is_quarter_pi():
    assert entanglement_measure(bell_state()) == pytest.approx(PI / 4, abs=1e-5)


def test_measure_matches_schmidt_on_bell():
    lam, dist = schmidt_oracle(bell_state())
    assert lam == pytest.approx(1 / SQ2, abs=1e-12)
    assert entanglement_measure(bell_state()) == pytest.approx(dist, abs=1e-5)


def test_measure_matches_schmidt_on_random_two_qubit_states():
    rng = np.random.default_rng(7)
    for _ in range(100):
        psi = encode_state(random_state_vector(rng, 2))
        _, expected = schmidt_oracle(psi)
        assert entanglement_measure(psi) == pytest.approx(expected, abs=1e-5)


def brute_force_product_distance(psi, coarse=6, refine=True):
    """Independent reference: angle-grid search over product states plus
    local simplex refinement.  Global phases are fixed by parametrizing
    each factor as (cos(t/2), sin(t/2) e^(i p))."""
    from scipy.optimize import minimize

    n = psi.nqubits
    tensor = psi.to_vector().conj().reshape([2] * n)

    def overlap(params):
        val = tensor
        for k in range(n):
            t, p = params[2 * k], params[2 * k + 1]
            c = np.array([math.cos(t / 2), math.sin(t / 2) * cmath.exp(1j * p)])
            val = np.tensordot(val, c, axes=([0], [0]))
        return abs(complex(val))

    thetas = np.linspace(0, PI, coarse)
    phis = np.linspace(0, 2 * PI, coarse, endpoint=False)
    best, best_params = -1.0, None
    grids = [thetas, phis] * n
    mesh = np.meshgrid(*grids, indexing="ij")
    flat = np.stack([m.ravel() for m in mesh], axis=1)
    for params in flat:
        v = overlap(params)
        if v > best:
            best, best_params = v, params
    if refine:
        res = minimize(lambda p: -overlap(p), best_params, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        best = max(best, -res.fun)
    return math.acos(min(best, 1.0))


def test_measure_ghz_matches_brute_force_and_closed_form():
    ghz = ghz_state(3)
    measured = entanglement_measure(ghz)
    reference = brute_force_product_distance(ghz)
    assert measured == pytest.approx(reference, abs=1e-4)
    assert measured == pytest.approx(PI / 4, abs=1e-5)  # max overlap 1/sqrt(2)


def test_measure_invariant_under_local_gates():
    rng = np.random.default_rng(9)
    for _ in range(10):
        psi = encode_state(random_state_vector(rng, 2))
        before = entanglement_measure(psi)
        kind = ("X", "Y", "Z", "H")[int(rng.integers(4))]
        qubit = int(rng.integers(1, 3))
        after = entanglement_measure(
            run_circuit_holo(Circuit(2, (GateSpec(kind, (qubit,)),)), psi))
        assert after == pytest.approx(before, abs=1e-6)


def test_cnot_lifts_plus_zero_to_bell_measure():
    plus_zero = encode_state(np.array([1, 0, 1, 0], dtype=complex) / SQ2)
    assert entanglement_measure(plus_zero) <= 1e-8
    bell = run_circuit_holo(Circuit(2, (GateSpec("CNOT", (1, 2)),)), plus_zero)
    assert entanglement_measure(bell) == pytest.approx(PI / 4, abs=1e-4)


def test_optimizer_monotone_convergence():
    rng = np.random.default_rng(11)
    for _ in range(5):
        psi = encode_state(random_state_vector(rng, 3))
        result = maximize_product_overlap(psi, restarts=4)
        for record in result.restarts:
            hist = record.history
            assert all(b >= a - 1e-14 for a, b in zip(hist, hist[1:]))


def test_optimizer_deterministic_for_fixed_seed():
    rng = np.random.default_rng(13)
    psi = encode_state(random_state_vector(rng, 3))
    r1 = maximize_product_overlap(psi, seed=42)
    r2 = maximize_product_overlap(psi, seed=42)
    assert r1.overlap == r2.overlap
    for f1, f2 in zip(r1.witness.factors, r2.witness.factors):
        assert np.array_equal(f1, f2)


def test_is_separable_examples():
    sep, witness = is_separable(encode_state(np.array([0, 1, 0, 0], dtype=complex)))
    assert sep
    rebuilt = witness.to_state().to_vector()
    target = np.array([0, 1, 0, 0], dtype=complex)
    # witness reconstructs the state up to global phase
    overlap = abs(np.vdot(rebuilt, target))
    assert overlap == pytest.approx(1.0, abs=1e-8)

    sep, witness = is_separable(bell_state())
    assert not sep and witness is None

    plus_zero = encode_state(np.array([1, 0, 1, 0], dtype=complex) / SQ2)
    sep, _ = is_separable(plus_zero)
    assert sep


def test_schmidt_oracle_examples():
    zero = encode_state(np.array([1, 0, 0, 0], dtype=complex))
    lam, dist = schmidt_oracle(zero)
    assert lam == pytest.approx(1.0, abs=1e-12) and dist == pytest.approx(0.0, abs=1e-7)

    skew = encode_state(np.array([0.6, 0, 0, 0.8], dtype=complex))
    lam, dist = schmidt_oracle(skew)
    assert lam == pytest.approx(0.8, abs=1e-12)
    assert dist == pytest.approx(math.acos(0.8), abs=1e-12)


def test_schmidt_oracle_rejects_wrong_register():
    with pytest.raises(ValueError):
        schmidt_oracle(encode_state(np.array([1.0, 0.0])))


# -- berry holonomy ---------------------------------------------------


def test_holonomy_constant_loop_is_zero():
    psi = encode_state(np.array([1.0, 0.0]))
    loop = StateLoop(tuple([psi] * 33))
    assert berry_holonomy(loop) == 0.0


def test_holonomy_bloch_circles_match_smooth_reference():
    for theta in (PI / 6, PI / 3, PI / 2):
        gamma = berry_holonomy(bloch_circle_loop(theta, 2000))
        reference = -PI * (1.0 - math.cos(theta))
        circ_diff = abs(math.remainder(gamma - reference, 2 * PI))
        assert circ_diff < 2e-3, theta


def test_holonomy_dense_reference_converges():
    # the discrete holonomy at M = 1e5 serves as the converged reference
    theta = PI / 3
    dense = berry_holonomy(bloch_circle_loop(theta, 100000))
    coarse = berry_holonomy(bloch_circle_loop(theta, 2000))
    assert abs(math.remainder(dense - coarse, 2 * PI)) < 2e-3
    assert abs(math.remainder(dense - (-PI / 2), 2 * PI)) < 1e-8


def test_holonomy_equator_hits_branch_point():
    gamma = berry_holonomy(bloch_circle_loop(PI / 2, 2000))
    assert abs(abs(gamma) - PI) < 2e-3  # -pi and +pi are the same angle


def test_holonomy_gauge_invariance():
    rng = np.random.default_rng(15)
    loop = bloch_circle_loop(PI / 3, 64)
    gamma = berry_holonomy(loop)
    phases = rng.uniform(0, 2 * PI, len(loop.states))
    phases[-1] = phases[0]  # the closing duplicate keeps the first state's gauge
    regauged = []
    for state, alpha in zip(loop.states, phases):
        amps = {b: cmath.exp(1j * alpha) * c for b, c in state.amplitudes.items()}
        regauged.append(HoloState(state.nqubits, amps))
    gamma2 = berry_holonomy(StateLoop(tuple(regauged)))
    assert abs(math.remainder(gamma - gamma2, 2 * PI)) < 1e-12


def test_holonomy_small_theta_small_phase():
    gamma = berry_holonomy(bloch_circle_loop(0.05, 500))
    assert abs(gamma) < 0.005


def test_loop_rejects_too_few_segments():
    psi = encode_state(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        StateLoop(tuple([psi] * 10))
    with pytest.raises(ValueError):
        bloch_circle_loop(PI / 3, 8)


def test_loop_rejects_open_path():
    states = [encode_state(np.array([1.0, 0.0]))] * 20
    states.append(encode_state(np.array([0.0, 1.0])))
    with pytest.raises(ValueError):
        StateLoop(tuple(states))


def test_holonomy_rejects_orthogonal_consecutive_states():
    zero = encode_state(np.array([1.0, 0.0]))
    one = encode_state(np.array([0.0, 1.0]))
    states = [zero, one] * 10 + [zero]
    loop = StateLoop(tuple(states))
    with pytest.raises(ValueError):
        berry_holonomy(loop)
