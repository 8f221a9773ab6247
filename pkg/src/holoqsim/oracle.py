"""Plain state-vector reference engine.

Completely independent route used to cross-check the polynomial engine:
amplitudes live in a flat complex vector of length 2^N, reshaped to
[2]*N so qubit j (1-based, big-endian) is axis j-1, and gates act by
index arithmetic on those axes.  Nothing here touches polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffop import Circuit, GateSpec

_SQRT2 = math.sqrt(2.0)

_ONE_QUBIT = {
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1j], [1j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "H": np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / _SQRT2,
}


@dataclass(frozen=True)
class StateVector:
    """Flat big-endian amplitude vector; index = bit string read as binary."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = int(round(math.log2(v.size))) if v.size else 0
        if v.size < 2 or 2 ** n != v.size:
            raise ValueError(
                f"amplitude vector length {v.size} is not a power of two >= 2")
        object.__setattr__(self, "amplitudes", v)

    @property
    def nqubits(self) -> int:
        return int(round(math.log2(self.amplitudes.size)))

    @property
    def is_normalized(self) -> bool:
        return abs(np.linalg.norm(self.amplitudes) - 1.0) <= 1e-10

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        v = np.zeros(2 ** len(bits), dtype=complex)
        v[int(bits, 2)] = 1.0
        return cls(v)


def _apply_single(tensor: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(u, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_gate_matrix(gate: GateSpec, state: StateVector) -> StateVector:
    """Apply one gate by slicing/contracting the [2]*N amplitude tensor."""
    n = state.nqubits
    for q in gate.qubits:
        if q > n:
            raise ValueError(
                f"gate {gate.kind} on qubit {q} exceeds register size {n}")
    t = state.amplitudes.reshape([2] * n).copy()
    kind = gate.kind
    if kind in _ONE_QUBIT:
        t = _apply_single(t, _ONE_QUBIT[kind], gate.qubits[0] - 1)
    elif kind == "SWAP":
        t = np.swapaxes(t, gate.qubits[0] - 1, gate.qubits[1] - 1).copy()
    elif kind == "CNOT":
        c, tg = gate.qubits[0] - 1, gate.qubits[1] - 1
        tc = np.moveaxis(t, c, 0)
        tc[1] = np.flip(tc[1], axis=tg if tg < c else tg - 1)
    elif kind == "CZ":
        c, tg = gate.qubits[0] - 1, gate.qubits[1] - 1
        tc = np.moveaxis(t, c, 0)
        ttg = np.moveaxis(tc[1], tg if tg < c else tg - 1, 0)
        ttg[1] = -ttg[1]
    elif kind == "CU":
        c, tg = gate.qubits[0] - 1, gate.qubits[1] - 1
        tc = np.moveaxis(t, c, 0)
        tc[1] = _apply_single(tc[1], gate.u, tg if tg < c else tg - 1)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    return StateVector(t.reshape(-1))


def run_circuit_matrix(circuit: Circuit, state: StateVector) -> StateVector:
    if 2 ** circuit.nqubits != state.amplitudes.size:
        raise ValueError("circuit and state register sizes differ")
    for gate in circuit.gates:
        state = apply_gate_matrix(gate, state)
    return state


def align_global_phase(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotate b by the unit phase that best matches it to a.

    The phase is read off the component pair with the largest |a_k * b_k|;
    when every such product is negligible (orthogonal supports) b is
    returned unchanged, which leaves an order-one deviation to report.
    """
    prod = a * b.conj()
    k = int(np.argmax(np.abs(prod)))
    if abs(prod[k]) < 1e-300:
        return b
    u = prod[k] / abs(prod[k])
    return u * b


def compare_states(a: np.ndarray | StateVector, b: np.ndarray | StateVector) -> float:
    """Max absolute amplitude deviation after global-phase alignment."""
    va = a.amplitudes if isinstance(a, StateVector) else np.asarray(a, dtype=complex).ravel()
    vb = b.amplitudes if isinstance(b, StateVector) else np.asarray(b, dtype=complex).ravel()
    if va.size != vb.size:
        raise ValueError("amplitude vectors differ in length")
    return float(np.max(np.abs(va - align_global_phase(va, vb))))
