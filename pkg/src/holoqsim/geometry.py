"""Projective-space geometry: distances, entanglement, holonomy.

Normalized N-qubit states are points of complex projective space with the
Fubini-Study metric; the distance between rays is

    D(psi, phi) = arccos |<psi|phi>|.

Product states form the Segre submanifold, and the entanglement measure
used here is the Fubini-Study distance from a state to that submanifold:

    E(psi) = min over products of arccos |<psi | c_1 x ... x c_N>|
           = arccos (max product overlap).

The maximum is found by alternating closed-form single-factor updates.
Fixing every factor but qubit j, the overlap is linear in c_j with
coefficient vector w_j (the state contracted against the other factors),
so the best unit c_j is conj(w_j)/||w_j|| and the new overlap is ||w_j||.
Each update can only raise the overlap, which gives monotone convergence;
deterministic seeded restarts guard against local maxima.  For two qubits
the exact answer is available independently from the Schmidt (singular
value) decomposition: max overlap = largest singular value of the 2x2
amplitude matrix.

The Berry phase of a closed loop of states is accumulated discretely:

    gamma = -arg prod_k <psi_k | psi_k+1>    (cyclically, psi_M = psi_0).

Under per-state phase changes psi_k -> e^(i alpha_k) psi_k each factor
picks up e^(i(alpha_k+1 - alpha_k)) and the cyclic product telescopes to
exactly 1, so the holonomy is gauge invariant to rounding error only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .holostate import NORM_TOL, HoloState, encode_state

# Below this gap from overlap 1, arccos amplifies one ulp of rounding to
# ~1.5e-8, so overlaps this close to 1 are snapped before taking arccos.
OVERLAP_SNAP = 1e-13

SEPARABLE_TOL = 1e-6
DEFAULT_RESTARTS = 16
MAX_SWEEPS = 500
GAIN_TOL = 1e-12
MIN_LOOP_SAMPLES = 16
LOOP_OVERLAP_FLOOR = 1e-12


def _require_normalized(state: HoloState, name: str) -> None:
    if not state.is_normalized:
        raise ValueError(
            f"{name} is not normalized: |norm - 1| = {abs(state.norm() - 1.0):.3g} "
            f"exceeds {NORM_TOL:g}")


def fidelity(psi: HoloState, phi: HoloState) -> float:
    """|<psi|phi>|^2 of two normalized states."""
    if psi.nqubits != phi.nqubits:
        raise ValueError("register mismatch")
    _require_normalized(psi, "psi")
    _require_normalized(phi, "phi")
    olap = sum(psi.amplitudes[b].conjugate() * phi.amplitudes[b]
               for b in psi.amplitudes.keys() & phi.amplitudes.keys())
    return abs(olap) ** 2


def fubini_study_distance(psi: HoloState, phi: HoloState) -> float:
    """arccos of the overlap magnitude; the projective-space arc length."""
    olap = math.sqrt(fidelity(psi, phi))
    if olap > 1.0 - OVERLAP_SNAP:
        olap = 1.0
    return math.acos(min(olap, 1.0))


@dataclass(frozen=True)
class ProductState:
    """Fully separable state: one normalized 2-vector factor per qubit."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        fs = []
        for k, f in enumerate(self.factors, start=1):
            v = np.asarray(f, dtype=complex).ravel()
            if v.shape != (2,):
                raise ValueError(f"factor {k} is not a 2-vector")
            nrm = np.linalg.norm(v)
            if abs(nrm - 1.0) > NORM_TOL:
                raise ValueError(f"factor {k} is not normalized (norm {nrm:.6g})")
            fs.append(v)
        object.__setattr__(self, "factors", tuple(fs))

    @property
    def nqubits(self) -> int:
        return len(self.factors)

    def amplitude_vector(self) -> np.ndarray:
        v = np.array([1.0 + 0j])
        for f in self.factors:
            v = np.kron(v, f)
        return v

    def to_state(self) -> HoloState:
        return encode_state(self.amplitude_vector())


@dataclass(frozen=True)
class RestartRecord:
    """Outcome of one optimization restart."""

    restart: int
    iterations: int
    overlap: float
    history: tuple[float, ...]


@dataclass(frozen=True)
class ProductOverlapResult:
    """Best product approximation found across all restarts."""

    overlap: float
    witness: ProductState
    restarts: tuple[RestartRecord, ...]


def _contract_except(conj_tensor: np.ndarray, factors: list[np.ndarray],
                     skip: int) -> np.ndarray:
    """w_j: the conjugated state tensor contracted with every factor but one."""
    n = conj_tensor.ndim
    letters = "abcdefghij"[:n]
    spec = (letters + "," + ",".join(letters[k] for k in range(n) if k != skip)
            + "->" + letters[skip])
    operands = [factors[k] for k in range(n) if k != skip]
    return np.einsum(spec, conj_tensor, *operands)


def maximize_product_overlap(psi: HoloState,
                             restarts: int = DEFAULT_RESTARTS,
                             seed: int = 0,
                             max_sweeps: int = MAX_SWEEPS,
                             gain_tol: float = GAIN_TOL) -> ProductOverlapResult:
    """Alternating closed-form ascent of |<psi|product>| with seeded restarts.

    Ties between restarts break toward the lower restart index, so results
    are reproducible for a fixed (seed, restarts) pair.
    """
    _require_normalized(psi, "psi")
    n = psi.nqubits
    tensor = psi.to_vector().reshape([2] * n)
    conj_tensor = tensor.conj()

    best: tuple[float, int] | None = None
    best_factors: list[np.ndarray] | None = None
    records = []
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        factors = []
        for _ in range(n):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            factors.append(v / np.linalg.norm(v))
        overlap = 0.0
        history = []
        sweeps = 0
        for sweeps in range(1, max_sweeps + 1):
            prev = overlap
            for j in range(n):
                w = _contract_except(conj_tensor, factors, j)
                nw = np.linalg.norm(w)
                if nw < 1e-15:
                    continue  # orthogonal trap; leave factor, restarts cover it
                factors[j] = w.conj() / nw
                overlap = nw
            history.append(overlap)
            if overlap - prev < gain_tol:
                break
        records.append(RestartRecord(r, sweeps, overlap, tuple(history)))
        if best is None or overlap > best[0]:
            best = (overlap, r)
            best_factors = [f.copy() for f in factors]
    assert best_factors is not None
    witness = ProductState(tuple(best_factors))
    return ProductOverlapResult(min(best[0], 1.0), witness, tuple(records))


def entanglement_measure(psi: HoloState,
                         restarts: int = DEFAULT_RESTARTS,
                         seed: int = 0) -> float:
    """Fubini-Study distance to the nearest product state (0 for separable)."""
    result = maximize_product_overlap(psi, restarts=restarts, seed=seed)
    olap = result.overlap
    if olap > 1.0 - OVERLAP_SNAP:
        olap = 1.0
    return math.acos(min(olap, 1.0))


def is_separable(psi: HoloState, tol: float = SEPARABLE_TOL,
                 restarts: int = DEFAULT_RESTARTS,
                 seed: int = 0) -> tuple[bool, ProductState | None]:
    """Separability decision with the best product state as witness.

    Returns (True, witness) when the distance to the product manifold is
    within tol; the witness then reconstructs the state up to phase.
    """
    result = maximize_product_overlap(psi, restarts=restarts, seed=seed)
    olap = result.overlap
    if olap > 1.0 - OVERLAP_SNAP:
        olap = 1.0
    measure = math.acos(min(olap, 1.0))
    if measure <= tol:
        return True, result.witness
    return False, None


def schmidt_oracle(psi: HoloState) -> tuple[float, float]:
    """Exact two-qubit answer from the SVD of the amplitude matrix.

    Returns (largest Schmidt coefficient, arccos of it); valid only for
    N = 2 where the Segre variety is cut out by a single determinant.
    """
    if psi.nqubits != 2:
        raise ValueError("Schmidt reference applies to exactly 2 qubits")
    _require_normalized(psi, "psi")
    m = psi.to_vector().reshape(2, 2)
    lam_max = float(np.linalg.svd(m, compute_uv=False)[0])
    lam_max = min(lam_max, 1.0)
    return lam_max, math.acos(lam_max)


@dataclass(frozen=True)
class StateLoop:
    """Closed discrete loop of normalized states; last entry repeats the first."""

    states: tuple[HoloState, ...]

    def __post_init__(self):
        sts = tuple(self.states)
        object.__setattr__(self, "states", sts)
        if len(sts) < MIN_LOOP_SAMPLES + 1:
            raise ValueError(
                f"loop needs at least {MIN_LOOP_SAMPLES} segments "
                f"({MIN_LOOP_SAMPLES + 1} stored states), got {len(sts)}")
        n = sts[0].nqubits
        for s in sts:
            if s.nqubits != n:
                raise ValueError("loop states live on different registers")
            _require_normalized(s, "loop state")
        first, last = sts[0].to_vector(), sts[-1].to_vector()
        gap = abs(abs(np.vdot(first, last)) - 1.0)
        if gap > 1e-9:
            raise ValueError(
                f"loop does not close: end-to-start overlap magnitude is {gap:.3g} from 1")

    @property
    def segments(self) -> int:
        return len(self.states) - 1


def berry_holonomy(loop: StateLoop) -> float:
    """Discrete geometric phase -arg prod <psi_k|psi_k+1> over a closed loop.

    The stored closing duplicate is dropped and the product closed
    cyclically back to the first state, which is what makes per-state
    gauge changes cancel exactly.  Consecutive overlaps too close to zero
    mean the discretization is too coarse to define the phase; those raise.
    Returned phase lies in (-pi, pi]; near the branch point +-pi the sign
    is a coin toss of rounding, so compare holonomies circularly.
    """
    vecs = [s.to_vector() for s in loop.states[:-1]]
    m = len(vecs)
    phase = 1.0 + 0j
    for k in range(m):
        olap = complex(np.vdot(vecs[k], vecs[(k + 1) % m]))
        mag = abs(olap)
        if mag <= LOOP_OVERLAP_FLOOR:
            raise ValueError(
                f"consecutive overlap at segment {k} has magnitude {mag:.3g}; "
                "loop too coarse for a well-defined holonomy")
        phase *= olap / mag
    return -cmath.phase(phase)


def bloch_circle_loop(theta: float, segments: int) -> StateLoop:
    """Single-qubit loop at fixed polar angle: azimuth swept 0 -> 2*pi.

    States are cos(theta/2)|0> + e^(i phi_k) sin(theta/2)|1> at the M+1
    grid azimuths; the closing entry reuses the first state's amplitudes
    exactly.  The smooth loop's geometric phase is -pi(1 - cos theta).
    """
    if segments < MIN_LOOP_SAMPLES:
        raise ValueError(f"need at least {MIN_LOOP_SAMPLES} segments")
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    states = []
    for k in range(segments):
        phi = 2.0 * math.pi * k / segments
        states.append(encode_state(np.array([c, s * cmath.exp(1j * phi)])))
    states.append(encode_state(np.array([c, s])))
    return StateLoop(tuple(states))
