"""Differential operators, substitutions, gate specs, and circuit runs."""

import math

import numpy as np
import pytest

from holoqsim import (
    Circuit,
    DiffOperator,
    GateSpec,
    SparsePoly,
    StateVector,
    Substitution,
    apply_diffop,
    apply_gate,
    apply_substitution,
    check_all_homogeneity,
    compare_states,
    compose,
    controlled_u,
    encode_basis,
    encode_state,
    gate_operator,
    haar_random_unitary,
    run_circuit_holo,
    run_circuit_matrix,
    sb_inner_product,
    to_poly,
)
from holoqsim.diffop import (
    cnot_op,
    cz_op,
    hadamard_op,
    pauli_x,
    pauli_y,
    pauli_z,
    swap_op,
)

from _support import random_circuit, random_state_vector

SQ2 = math.sqrt(2.0)

X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
Y_MAT = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z_MAT = np.array([[1, 0], [0, -1]], dtype=complex)
H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / SQ2


def simple_action_matrix(op, nqubits):
    """Matrix of an operator restricted to the physical basis monomials."""
    dim = 2 ** nqubits
    m = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        poly = encode_basis(format(col, f"0{nqubits}b"))
        out = (apply_substitution(op, poly) if isinstance(op, Substitution)
               else apply_diffop(op, poly))
        for row in range(dim):
            key = next(iter(encode_basis(format(row, f"0{nqubits}b")).terms))
            m[row, col] = out.coeff(key)
    return m


# -- basic operator action --------------------------------------------


def test_pauli_x_action():
    x = pauli_x(1, 1)
    assert apply_diffop(x, encode_basis("0")) == encode_basis("1")
    assert apply_diffop(x, encode_basis("1")) == encode_basis("0")


def test_pauli_z_action():
    z = pauli_z(1, 1)
    assert apply_diffop(z, encode_basis("0")) == encode_basis("0")
    assert apply_diffop(z, encode_basis("1")) == -1.0 * encode_basis("1")


def test_pauli_y_action():
    y = pauli_y(1, 1)
    assert apply_diffop(y, encode_basis("0")).terms == {(0, 1): 1j}
    assert apply_diffop(y, encode_basis("1")).terms == {(1, 0): -1j}


def test_derivative_falling_factorial():
    # d/dz_a applied to z_a^3 gives 3 z_a^2
    d = DiffOperator.term(1, 1.0, (0, 0), (1, 0))
    out = apply_diffop(d, SparsePoly(1, {(3, 0): 1.0}))
    assert out.terms == {(2, 0): 3.0 + 0j}


def test_diffop_beyond_physical_degree():
    # second derivative sees the full falling factorial 4*3
    d2 = DiffOperator.term(1, 1.0, (0, 0), (2, 0))
    out = apply_diffop(d2, SparsePoly(1, {(4, 0): 1.0}))
    assert out.terms == {(2, 0): 12.0 + 0j}


# -- compose and normal ordering --------------------------------------


def test_compose_canonical_commutator():
    # d_a after z_a: normal ordering gives z_a d_a + 1
    za = DiffOperator.term(1, 1.0, (1, 0), (0, 0))
    da = DiffOperator.term(1, 1.0, (0, 0), (1, 0))
    prod = compose(da, za)
    assert prod.terms == {((1, 0), (1, 0)): 1.0 + 0j, ((0, 0), (0, 0)): 1.0 + 0j}
    # reversed order has no contraction
    assert compose(za, da).terms == {((1, 0), (1, 0)): 1.0 + 0j}


def test_compose_matches_sequential_application():
    rng = np.random.default_rng(3)
    ops = [pauli_x(2, 1), pauli_y(2, 2), pauli_z(2, 1), hadamard_op(2, 2),
           cnot_op(1, 2, 2), cz_op(2, 1, 2)]
    polys = [encode_basis(format(k, "02b")) for k in range(4)]
    # also a non-physical polynomial: compose must agree on any input
    polys.append(SparsePoly(2, {(2, 1, 0, 3): 1.5 - 0.5j, (0, 0, 1, 1): 1j}))
    for _ in range(30):
        op1 = ops[int(rng.integers(len(ops)))]
        op2 = ops[int(rng.integers(len(ops)))]
        fused = compose(op1, op2)
        for p in polys:
            direct = apply_diffop(op1, apply_diffop(op2, p))
            assert fused and direct.max_coeff_diff(apply_diffop(fused, p)) < 1e-12


def test_pauli_products_on_physical_subspace():
    # X Y = i Z and cyclic permutations, as actions on basis monomials
    x, y, z = pauli_x(1, 1), pauli_y(1, 1), pauli_z(1, 1)
    cases = [(x, y, z), (y, z, x), (z, x, y)]
    for a, b, c in cases:
        ab = compose(a, b)
        for bits in ("0", "1"):
            lhs = apply_diffop(ab, encode_basis(bits))
            rhs = 1j * apply_diffop(c, encode_basis(bits))
            assert lhs.max_coeff_diff(rhs) < 1e-12


def test_pauli_squares_are_identity_on_physical_subspace():
    for op in (pauli_x(1, 1), pauli_y(1, 1), pauli_z(1, 1)):
        sq = compose(op, op)
        for bits in ("0", "1"):
            assert apply_diffop(sq, encode_basis(bits)) == encode_basis(bits)


def test_commutator_xy():
    # [X, Y] = 2iZ on the physical subspace
    x, y, z = pauli_x(1, 1), pauli_y(1, 1), pauli_z(1, 1)
    comm = compose(x, y) - compose(y, x)
    for bits in ("0", "1"):
        lhs = apply_diffop(comm, encode_basis(bits))
        rhs = 2j * apply_diffop(z, encode_basis(bits))
        assert lhs.max_coeff_diff(rhs) < 1e-12


# -- substitutions ----------------------------------------------------


def test_hadamard_substitution_action():
    sub = Substitution.hadamard(1, 1)
    out0 = apply_substitution(sub, encode_basis("0"))
    assert out0.max_coeff_diff(
        (1 / SQ2) * (encode_basis("0") + encode_basis("1"))) < 1e-15
    out1 = apply_substitution(sub, encode_basis("1"))
    assert out1.max_coeff_diff(
        (1 / SQ2) * (encode_basis("0") - encode_basis("1"))) < 1e-15


def test_hadamard_dual_representations_agree():
    sub = Substitution.hadamard(2, 2)
    op = hadamard_op(2, 2)
    for k in range(4):
        poly = encode_basis(format(k, "02b"))
        assert apply_substitution(sub, poly).max_coeff_diff(
            apply_diffop(op, poly)) < 1e-12


def test_swap_substitution_and_operator_agree():
    sub = Substitution.swap(2, 1, 2)
    op = swap_op(1, 2, 2)
    for k in range(4):
        poly = encode_basis(format(k, "02b"))
        assert apply_substitution(sub, poly).max_coeff_diff(
            apply_diffop(op, poly)) < 1e-12


def test_swap_exchanges_labels():
    sub = Substitution.swap(2, 1, 2)
    assert apply_substitution(sub, encode_basis("01")) == encode_basis("10")


def test_substitution_rejects_singular_matrix():
    with pytest.raises(ValueError):
        Substitution(1, np.zeros((2, 2)))


# -- controlled gates -------------------------------------------------


def test_cnot_action_on_basis():
    op = cnot_op(1, 2, 2)
    assert apply_diffop(op, encode_basis("00")) == encode_basis("00")
    assert apply_diffop(op, encode_basis("01")) == encode_basis("01")
    assert apply_diffop(op, encode_basis("10")) == encode_basis("11")
    assert apply_diffop(op, encode_basis("11")) == encode_basis("10")


def test_cz_symmetric_in_its_qubits():
    a = simple_action_matrix(cz_op(1, 2, 2), 2)
    b = simple_action_matrix(cz_op(2, 1, 2), 2)
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.max(np.abs(a - np.diag([1, 1, 1, -1]))) < 1e-12


def test_controlled_u_identity_block():
    op = controlled_u(1, 2, np.eye(2), 2)
    for k in range(4):
        poly = encode_basis(format(k, "02b"))
        assert apply_diffop(op, poly) == poly


def test_controlled_u_reproduces_cnot_and_cz():
    cu_x = simple_action_matrix(controlled_u(1, 2, X_MAT, 2), 2)
    assert np.max(np.abs(cu_x - simple_action_matrix(cnot_op(1, 2, 2), 2))) < 1e-12
    cu_z = simple_action_matrix(controlled_u(1, 2, Z_MAT, 2), 2)
    assert np.max(np.abs(cu_z - simple_action_matrix(cz_op(1, 2, 2), 2))) < 1e-12


def test_controlled_u_haar_block_matches_dense_matrix():
    rng = np.random.default_rng(5)
    for _ in range(10):
        u = haar_random_unitary(rng)
        act = simple_action_matrix(controlled_u(1, 2, u, 2), 2)
        dense = np.eye(4, dtype=complex)
        dense[2:, 2:] = u
        assert np.max(np.abs(act - dense)) < 1e-10


def test_controlled_u_rejects_nonunitary():
    with pytest.raises(ValueError):
        controlled_u(1, 2, np.array([[1.0, 0.0], [0.0, 2.0]]), 2)


# -- gate specs and circuits ------------------------------------------


def test_gatespec_validation():
    with pytest.raises(ValueError):
        GateSpec("Q", (1,))
    with pytest.raises(ValueError):
        GateSpec("X", (1, 2))
    with pytest.raises(ValueError):
        GateSpec("CNOT", (2, 2))
    with pytest.raises(ValueError):
        GateSpec("CU", (1, 2))  # missing block
    with pytest.raises(ValueError):
        GateSpec("X", (1,), np.eye(2))  # stray block


def test_circuit_rejects_out_of_range_qubits():
    with pytest.raises(ValueError):
        Circuit(1, (GateSpec("X", (2,)),))


def test_gate_operator_default_forms():
    assert isinstance(gate_operator(GateSpec("H", (1,)), 1), Substitution)
    assert isinstance(gate_operator(GateSpec("SWAP", (1, 2)), 2), Substitution)
    assert isinstance(gate_operator(GateSpec("H", (1,)), 1, form="diffop"),
                      DiffOperator)
    assert isinstance(gate_operator(GateSpec("X", (1,)), 1), DiffOperator)


# -- full gate application --------------------------------------------


def test_apply_gate_bit_flip():
    psi = encode_state(np.array([1.0, 0.0]))
    out = apply_gate(GateSpec("X", (1,)), psi)
    assert out.amplitudes == {"1": 1.0 + 0j}


def test_apply_gate_hadamard_then_measure_coeffs():
    psi = encode_state(np.array([1.0, 0.0]))
    out = apply_gate(GateSpec("H", (1,)), psi)
    assert abs(out.amplitudes["0"] - 1 / SQ2) < 1e-15
    assert abs(out.amplitudes["1"] - 1 / SQ2) < 1e-15


def test_bell_circuit():
    circ = Circuit(2, (GateSpec("H", (1,)), GateSpec("CNOT", (1, 2))))
    out = run_circuit_holo(circ, encode_state(np.array([1, 0, 0, 0], dtype=complex)))
    r = 1 / SQ2
    assert abs(out.amplitudes["00"] - r) < 1e-15
    assert abs(out.amplitudes["11"] - r) < 1e-15
    assert set(out.amplitudes) == {"00", "11"}


def test_empty_circuit_is_identity():
    rng = np.random.default_rng(9)
    psi = encode_state(random_state_vector(rng, 3))
    assert run_circuit_holo(Circuit(3, ()), psi) == psi


def test_double_x_restores_state():
    rng = np.random.default_rng(13)
    psi = encode_state(random_state_vector(rng, 2))
    circ = Circuit(2, (GateSpec("X", (1,)), GateSpec("X", (1,))))
    out = run_circuit_holo(circ, psi)
    assert max(abs(out.amplitudes[b] - psi.amplitudes[b])
               for b in psi.amplitudes) < 1e-12


def test_gate_identities_square_to_identity():
    rng = np.random.default_rng(17)
    psi = encode_state(random_state_vector(rng, 2))
    doubles = [
        (GateSpec("X", (1,)),) * 2,
        (GateSpec("Y", (2,)),) * 2,
        (GateSpec("Z", (1,)),) * 2,
        (GateSpec("H", (2,)),) * 2,
        (GateSpec("CNOT", (1, 2)),) * 2,
        (GateSpec("CZ", (1, 2)),) * 2,
        (GateSpec("SWAP", (1, 2)),) * 2,
    ]
    for gates in doubles:
        out = run_circuit_holo(Circuit(2, gates), psi)
        dev = compare_states(psi.to_vector(), out.to_vector())
        assert dev < 1e-10, gates[0].kind


def test_unitarity_preserves_inner_products():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        u = encode_state(random_state_vector(rng, n))
        v = encode_state(random_state_vector(rng, n))
        circ = random_circuit(rng, n, 8)
        ip_before = sb_inner_product(to_poly(u), to_poly(v))
        ip_after = sb_inner_product(to_poly(run_circuit_holo(circ, u)),
                                    to_poly(run_circuit_holo(circ, v)))
        assert abs(ip_before - ip_after) < 1e-10


def test_homogeneity_preserved_through_random_circuits():
    rng = np.random.default_rng(23)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        psi = encode_state(random_state_vector(rng, n))
        state = psi
        for gate in random_circuit(rng, n, 10).gates:
            state = apply_gate(gate, state)
            assert check_all_homogeneity(to_poly(state))


def test_matches_oracle_on_random_circuits():
    rng = np.random.default_rng(29)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        depth = int(rng.integers(1, 20))
        circ = random_circuit(rng, n, depth)
        v0 = random_state_vector(rng, n)
        holo = run_circuit_holo(circ, encode_state(v0))
        ref = run_circuit_matrix(circ, StateVector(v0))
        assert compare_states(ref, holo.to_vector()) < 1e-9


def test_diffop_form_matches_substitution_form():
    rng = np.random.default_rng(31)
    psi = encode_state(random_state_vector(rng, 2))
    circ = Circuit(2, (GateSpec("H", (1,)), GateSpec("SWAP", (1, 2)),
                       GateSpec("H", (2,))))
    a = run_circuit_holo(circ, psi, form="default")
    b = run_circuit_holo(circ, psi, form="diffop")
    assert compare_states(a.to_vector(), b.to_vector()) < 1e-10


def test_haar_random_unitary_is_unitary():
    rng = np.random.default_rng(37)
    for _ in range(50):
        u = haar_random_unitary(rng)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12
