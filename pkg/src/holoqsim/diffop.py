"""Gates as polynomial differential operators and variable substitutions.

Single-qubit gates act on the pair (z_a, z_b) of the target qubit through
first-order operators built from multiplication and d/dz:

    X = z_a d_b + z_b d_a        (swaps the two variables' roles)
    Y = -i (z_a d_b - z_b d_a)
    Z = z_a d_a - z_b d_b        (degree difference between the modes)
    H = (X + Z) / sqrt(2)

H and the two-qubit SWAP also have an exact substitution form: H pulls
variables back through the linear map (z_a, z_b) -> ((z_a + z_b)/sqrt(2),
(z_a - z_b)/sqrt(2)) and SWAP permutes the two qubit pairs.  Controlled
gates decompose over the control pair's projectors:

    CNOT = (1 + Z_c)/2 + (1 - Z_c)/2 * X_t
    CZ   = (1 + Z_c + Z_t - Z_c Z_t)/2
    CU   = u00 + u01 X_t + u10 Y_t + u11 Z_t  conjugated by the control
           projectors, with u00..u11 the Pauli components tr(u)/2, tr(Xu)/2,
           tr(Yu)/2, tr(Zu)/2 of the 2x2 block.

Products of operators are normal ordered (all multiplications left of all
derivatives) with the per-variable commutation rule

    d^d z^m = sum_i C(d, i) * m!/(m-i)! * z^(m-i) d^(d-i),

which is how compose() keeps the term dictionary canonical.  Operator
identities such as X Y = i Z hold on the physical (degree-one) subspace:
as raw normally ordered expressions the two sides can differ by terms like
z_a^2 d_b^2 that kill every physical polynomial, so identity checks are
made by applying both sides to basis monomials rather than comparing term
dictionaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iter_product

import numpy as np

from .holostate import (
    ZERO_TOL,
    HoloState,
    SparsePoly,
    a_index,
    b_index,
    from_poly,
    to_poly,
)

_SQRT2 = math.sqrt(2.0)

GATE_ARITY = {
    "X": 1, "Y": 1, "Z": 1, "H": 1,
    "SWAP": 2, "CNOT": 2, "CZ": 2, "CU": 2,
}

UNITARY_TOL = 1e-10


class DiffOperator:
    """Normally ordered operator: dict (mult_exponents, deriv_exponents) -> coeff.

    Each key is a pair of length-2N tuples; the term acts on a monomial by
    differentiating first (falling factorials) and multiplying after.
    """

    __slots__ = ("nqubits", "terms")

    def __init__(self, nqubits: int,
                 terms: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] | None = None):
        if nqubits < 1:
            raise ValueError(f"nqubits must be >= 1, got {nqubits}")
        self.nqubits = nqubits
        nvars = 2 * nqubits
        clean: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
        for (mult, deriv), coeff in (terms or {}).items():
            mult, deriv = tuple(mult), tuple(deriv)
            if len(mult) != nvars or len(deriv) != nvars:
                raise ValueError("exponent tuples must have length 2N")
            if any(e < 0 for e in mult) or any(e < 0 for e in deriv):
                raise ValueError("negative exponent in operator term")
            c = complex(coeff)
            if abs(c) > ZERO_TOL:
                key = (mult, deriv)
                clean[key] = clean.get(key, 0j) + c
                if abs(clean[key]) <= ZERO_TOL:
                    del clean[key]
        self.terms = clean

    @classmethod
    def zero(cls, nqubits: int) -> "DiffOperator":
        return cls(nqubits, {})

    @classmethod
    def identity(cls, nqubits: int, coeff: complex = 1.0 + 0j) -> "DiffOperator":
        z = (0,) * (2 * nqubits)
        return cls(nqubits, {(z, z): coeff})

    @classmethod
    def term(cls, nqubits: int, coeff: complex,
             mult: tuple[int, ...], deriv: tuple[int, ...]) -> "DiffOperator":
        return cls(nqubits, {(tuple(mult), tuple(deriv)): coeff})

    @classmethod
    def z_times_d(cls, nqubits: int, zvar: int, dvar: int,
                  coeff: complex = 1.0 + 0j) -> "DiffOperator":
        """Single term coeff * z_zvar * d/dz_dvar (flat variable indices)."""
        nvars = 2 * nqubits
        mult = [0] * nvars
        deriv = [0] * nvars
        mult[zvar] = 1
        deriv[dvar] = 1
        return cls.term(nqubits, coeff, tuple(mult), tuple(deriv))

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        if self.nqubits != other.nqubits:
            raise ValueError("register mismatch")
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0j) + c
        return DiffOperator(self.nqubits, out)

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-1.0) * other

    def __neg__(self) -> "DiffOperator":
        return (-1.0) * self

    def __mul__(self, scalar) -> "DiffOperator":
        return DiffOperator(self.nqubits,
                            {k: complex(scalar) * c for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.nqubits == other.nqubits and self.terms == other.terms

    def __hash__(self):
        raise TypeError("DiffOperator is unhashable")

    def isclose(self, other: "DiffOperator", tol: float = 1e-12) -> bool:
        if self.nqubits != other.nqubits:
            return False
        for key in self.terms.keys() | other.terms.keys():
            if abs(self.terms.get(key, 0j) - other.terms.get(key, 0j)) > tol:
                return False
        return True

    def __repr__(self) -> str:
        if not self.terms:
            return f"DiffOperator(n={self.nqubits}, 0)"
        parts = []
        for mult, deriv in sorted(self.terms):
            c = self.terms[(mult, deriv)]
            zs = "*".join(f"z{k}^{e}" if e > 1 else f"z{k}"
                          for k, e in enumerate(mult) if e)
            ds = "*".join(f"d{k}^{e}" if e > 1 else f"d{k}"
                          for k, e in enumerate(deriv) if e)
            body = "*".join(x for x in (zs, ds) if x) or "1"
            parts.append(f"({c:.6g})*{body}")
        return f"DiffOperator(n={self.nqubits}, " + " + ".join(parts) + ")"


def apply_diffop(op: DiffOperator, poly: SparsePoly) -> SparsePoly:
    """Apply an operator term by term via falling factorials on monomials."""
    if op.nqubits != poly.nqubits:
        raise ValueError("register mismatch between operator and polynomial")
    out: dict[tuple[int, ...], complex] = {}
    for (mult, deriv), oc in op.terms.items():
        for expo, pc in poly.terms.items():
            factor = 1
            for e, d in zip(expo, deriv):
                if d > e:
                    factor = 0
                    break
                factor *= math.perm(e, d)
            if factor == 0:
                continue
            key = tuple(e - d + m for e, d, m in zip(expo, deriv, mult))
            out[key] = out.get(key, 0j) + oc * pc * factor
    return SparsePoly(poly.nqubits, out)


def compose(op1: DiffOperator, op2: DiffOperator) -> DiffOperator:
    """Normally ordered product op1 after op2 ((op1 . op2) f = op1(op2 f)).

    For each pair of terms the inner derivative block d^d1 is pushed right
    through the outer multiplication block z^m2 one variable at a time:
    d^d z^m = sum_i C(d, i) (m falling i) z^(m-i) d^(d-i).
    """
    if op1.nqubits != op2.nqubits:
        raise ValueError("register mismatch")
    nvars = 2 * op1.nqubits
    out: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for (m1, d1), c1 in op1.terms.items():
        for (m2, d2), c2 in op2.terms.items():
            ranges = [range(min(d1[k], m2[k]) + 1) for k in range(nvars)]
            for contraction in iter_product(*ranges):
                weight = 1
                for k, i in enumerate(contraction):
                    if i:
                        weight *= math.comb(d1[k], i) * math.perm(m2[k], i)
                mult = tuple(m1[k] + m2[k] - contraction[k] for k in range(nvars))
                deriv = tuple(d1[k] + d2[k] - contraction[k] for k in range(nvars))
                key = (mult, deriv)
                out[key] = out.get(key, 0j) + c1 * c2 * weight
    return DiffOperator(op1.nqubits, out)


# -- substitutions ----------------------------------------------------


class Substitution:
    """Pullback f -> f(M z) through an invertible linear map on the variables."""

    __slots__ = ("nqubits", "matrix")

    def __init__(self, nqubits: int, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2 * nqubits, 2 * nqubits):
            raise ValueError(f"matrix shape {m.shape}, expected {(2*nqubits, 2*nqubits)}")
        if abs(np.linalg.det(m)) < 1e-12:
            raise ValueError("substitution matrix is singular")
        self.nqubits = nqubits
        self.matrix = m

    @classmethod
    def identity(cls, nqubits: int) -> "Substitution":
        return cls(nqubits, np.eye(2 * nqubits, dtype=complex))

    @classmethod
    def hadamard(cls, nqubits: int, qubit: int) -> "Substitution":
        """z_a -> (z_a + z_b)/sqrt(2), z_b -> (z_a - z_b)/sqrt(2) on one pair."""
        m = np.eye(2 * nqubits, dtype=complex)
        ia, ib = a_index(qubit), b_index(qubit)
        m[ia, ia] = m[ia, ib] = m[ib, ia] = 1.0 / _SQRT2
        m[ib, ib] = -1.0 / _SQRT2
        return cls(nqubits, m)

    @classmethod
    def swap(cls, nqubits: int, qubit1: int, qubit2: int) -> "Substitution":
        """Exchange the (z_a, z_b) pairs of two qubits."""
        if qubit1 == qubit2:
            raise ValueError("SWAP needs two distinct qubits")
        m = np.eye(2 * nqubits, dtype=complex)
        for off in (0, 1):
            i, j = a_index(qubit1) + off, a_index(qubit2) + off
            m[[i, j]] = m[[j, i]]
        return cls(nqubits, m)


def apply_substitution(sub: Substitution, poly: SparsePoly) -> SparsePoly:
    """Expand f(M z) by raising each substituted linear form to its exponent."""
    if sub.nqubits != poly.nqubits:
        raise ValueError("register mismatch")
    nvars = 2 * poly.nqubits
    linear_forms = []
    for k in range(nvars):
        lf = SparsePoly.zero(poly.nqubits)
        for l in range(nvars):
            if abs(sub.matrix[k, l]) > ZERO_TOL:
                lf = lf + sub.matrix[k, l] * SparsePoly.variable(poly.nqubits, l)
        linear_forms.append(lf)
    out = SparsePoly.zero(poly.nqubits)
    for expo, coeff in poly.terms.items():
        term = SparsePoly.one(poly.nqubits) * coeff
        for k, e in enumerate(expo):
            for _ in range(e):
                term = term * linear_forms[k]
        out = out + term
    return out


# -- gate specs and circuits ------------------------------------------


@dataclass(frozen=True)
class GateSpec:
    """One gate application: kind, 1-based qubit indices, optional 2x2 block."""

    kind: str
    qubits: tuple[int, ...]
    u: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        if len(qs) != GATE_ARITY[self.kind]:
            raise ValueError(
                f"{self.kind} takes {GATE_ARITY[self.kind]} qubit(s), got {qs}")
        if any(q < 1 for q in qs):
            raise ValueError(f"qubit indices are 1-based, got {qs}")
        if len(set(qs)) != len(qs):
            raise ValueError(f"repeated qubit in {qs}")
        if self.kind == "CU":
            if self.u is None:
                raise ValueError("CU requires a 2x2 unitary block")
            u = np.asarray(self.u, dtype=complex)
            if u.shape != (2, 2):
                raise ValueError(f"CU block has shape {u.shape}, expected (2, 2)")
            if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
                raise ValueError("CU block is not unitary within 1e-10")
            object.__setattr__(self, "u", u)
        elif self.u is not None:
            raise ValueError(f"{self.kind} does not take a unitary block")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a fixed register size."""

    nqubits: int
    gates: tuple[GateSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.nqubits < 1:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for q in g.qubits:
                if q > self.nqubits:
                    raise ValueError(
                        f"gate {g.kind} on qubit {q} exceeds register size {self.nqubits}")

    def __len__(self) -> int:
        return len(self.gates)


# -- single-qubit operator builders -----------------------------------


def pauli_x(nqubits: int, qubit: int) -> DiffOperator:
    ia, ib = a_index(qubit), b_index(qubit)
    return (DiffOperator.z_times_d(nqubits, ia, ib)
            + DiffOperator.z_times_d(nqubits, ib, ia))


def pauli_y(nqubits: int, qubit: int) -> DiffOperator:
    ia, ib = a_index(qubit), b_index(qubit)
    return (DiffOperator.z_times_d(nqubits, ia, ib, -1j)
            + DiffOperator.z_times_d(nqubits, ib, ia, 1j))


def pauli_z(nqubits: int, qubit: int) -> DiffOperator:
    ia, ib = a_index(qubit), b_index(qubit)
    return (DiffOperator.z_times_d(nqubits, ia, ia)
            + DiffOperator.z_times_d(nqubits, ib, ib, -1.0))


def hadamard_op(nqubits: int, qubit: int) -> DiffOperator:
    return (1.0 / _SQRT2) * (pauli_x(nqubits, qubit) + pauli_z(nqubits, qubit))


def _projector_terms(nqubits: int, qubit: int):
    """(P0, P1) with P0 = (1 + Z)/2 picking bit 0 and P1 = (1 - Z)/2 bit 1."""
    one = DiffOperator.identity(nqubits)
    z = pauli_z(nqubits, qubit)
    return 0.5 * (one + z), 0.5 * (one - z)


def controlled_u(control: int, target: int, u: np.ndarray,
                 nqubits: int) -> DiffOperator:
    """Controlled 2x2 block via its Pauli components on the target pair.

    The block expands as u = u0 I + ux X + uy Y + uz Z with u0 = tr(u)/2,
    ux = tr(X u)/2, uy = tr(Y u)/2, uz = tr(Z u)/2, then the operator is
    P0_c + P1_c * (that expansion on the target).
    """
    if control == target:
        raise ValueError("control and target must differ")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("controlled block must be 2x2")
    if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
        raise ValueError("controlled block is not unitary within 1e-10")
    u0 = (u[0, 0] + u[1, 1]) / 2.0
    ux = (u[0, 1] + u[1, 0]) / 2.0
    uy = (1j * u[0, 1] - 1j * u[1, 0]) / 2.0  # tr(Y u)/2 with Y = [[0,-i],[i,0]]
    uz = (u[0, 0] - u[1, 1]) / 2.0
    p0, p1 = _projector_terms(nqubits, control)
    block = (u0 * DiffOperator.identity(nqubits)
             + ux * pauli_x(nqubits, target)
             + uy * pauli_y(nqubits, target)
             + uz * pauli_z(nqubits, target))
    return p0 + compose(p1, block)


def cnot_op(control: int, target: int, nqubits: int) -> DiffOperator:
    p0, p1 = _projector_terms(nqubits, control)
    return p0 + compose(p1, pauli_x(nqubits, target))


def cz_op(control: int, target: int, nqubits: int) -> DiffOperator:
    one = DiffOperator.identity(nqubits)
    zc = pauli_z(nqubits, control)
    zt = pauli_z(nqubits, target)
    return 0.5 * (one + zc + zt - compose(zc, zt))


def swap_op(qubit1: int, qubit2: int, nqubits: int) -> DiffOperator:
    """SWAP as (1 + XX + YY + ZZ)/2, the operator twin of the pair exchange."""
    one = DiffOperator.identity(nqubits)
    xx = compose(pauli_x(nqubits, qubit1), pauli_x(nqubits, qubit2))
    yy = compose(pauli_y(nqubits, qubit1), pauli_y(nqubits, qubit2))
    zz = compose(pauli_z(nqubits, qubit1), pauli_z(nqubits, qubit2))
    return 0.5 * (one + xx + yy + zz)


def gate_operator(gate: GateSpec, nqubits: int,
                  form: str = "default") -> DiffOperator | Substitution:
    """Representation of a gate on an N-qubit register.

    H and SWAP default to their exact Substitution form; pass form="diffop"
    to get them as differential operators instead.  Everything else is a
    DiffOperator.
    """
    if form not in ("default", "diffop"):
        raise ValueError(f"unknown form {form!r}")
    k, qs = gate.kind, gate.qubits
    if k == "X":
        return pauli_x(nqubits, qs[0])
    if k == "Y":
        return pauli_y(nqubits, qs[0])
    if k == "Z":
        return pauli_z(nqubits, qs[0])
    if k == "H":
        if form == "diffop":
            return hadamard_op(nqubits, qs[0])
        return Substitution.hadamard(nqubits, qs[0])
    if k == "SWAP":
        if form == "diffop":
            return swap_op(qs[0], qs[1], nqubits)
        return Substitution.swap(nqubits, qs[0], qs[1])
    if k == "CNOT":
        return cnot_op(qs[0], qs[1], nqubits)
    if k == "CZ":
        return cz_op(qs[0], qs[1], nqubits)
    if k == "CU":
        return controlled_u(qs[0], qs[1], gate.u, nqubits)
    raise ValueError(f"unknown gate kind {k!r}")


def apply_gate(gate: GateSpec, state: HoloState,
               form: str = "default") -> HoloState:
    """Run one gate through the polynomial representation and decode back."""
    for q in gate.qubits:
        if q > state.nqubits:
            raise ValueError(
                f"gate {gate.kind} on qubit {q} exceeds register size {state.nqubits}")
    poly = to_poly(state)
    op = gate_operator(gate, state.nqubits, form=form)
    if isinstance(op, Substitution):
        out = apply_substitution(op, poly)
    else:
        out = apply_diffop(op, poly)
    return from_poly(out)


def run_circuit_holo(circuit: Circuit, state: HoloState,
                     form: str = "default") -> HoloState:
    """Fold a circuit over a state, gate by gate, in the polynomial picture."""
    if circuit.nqubits != state.nqubits:
        raise ValueError(
            f"circuit is for {circuit.nqubits} qubit(s), state has {state.nqubits}")
    for gate in circuit.gates:
        state = apply_gate(gate, state, form=form)
    return state


def haar_random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed 2x2 unitary: QR of a complex Gaussian, phases fixed."""
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
