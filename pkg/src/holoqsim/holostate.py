"""Qubit states as holomorphic polynomials.

An N-qubit state is stored as a polynomial in 2N complex variables, one
(z_a, z_b) pair per qubit.  The computational basis string s maps to the
monomial

    prod_j z_{a_j}^(1 - s_j) * z_{b_j}^(s_j)

so bit 0 of qubit j is carried by z_{a_j} and bit 1 by z_{b_j}.  A general
state is a complex combination of these monomials and is therefore
homogeneous of degree one in every pair: applying the Euler operator
z_a d/dz_a + z_b d/dz_b of any qubit returns the polynomial unchanged.
That degree-one condition is what makes a polynomial "physical" here, and
`from_poly` refuses anything outside it.

Variables are indexed 0..2N-1 with a_j at 2*(j-1) and b_j at 2*(j-1)+1
for qubits j = 1..N.  Bit strings are big-endian: qubit 1 is the leftmost
character, so "01" means qubit 1 in 0 and qubit 2 in 1, and the string
read as a binary integer is the index into a flat amplitude vector.

The inner product is the Gaussian (Bargmann) one, under which monomials
are orthogonal with ||z^e||^2 = prod_k e_k!.  On physical polynomials all
factorials are 0! or 1!, so it reduces to the usual amplitude dot product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Coefficients at or below this magnitude are dropped from stored maps.
ZERO_TOL = 1e-14
# |<psi|psi> - 1| bound used when flagging a state as normalized.
NORM_TOL = 1e-10


class NonPhysicalPolynomialError(ValueError):
    """Raised when a polynomial is not a valid one-hot qubit encoding."""


@dataclass(frozen=True)
class BasisConvention:
    """Fixed record of the encoding conventions used across the package."""

    zero_mode: str = "a"   # bit 0 lives on the first variable of the pair
    one_mode: str = "b"    # bit 1 lives on the second
    bit_order: str = "big-endian"  # qubit 1 = leftmost character = MSB

    def mode_offset(self, bit: int) -> int:
        """Offset (0 for the a-variable, 1 for the b-variable) of a bit value."""
        if bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {bit!r}")
        return bit


BASIS = BasisConvention()


def a_index(qubit: int) -> int:
    """Flat variable index of z_a for 1-based qubit j."""
    return 2 * (qubit - 1)


def b_index(qubit: int) -> int:
    """Flat variable index of z_b for 1-based qubit j."""
    return 2 * (qubit - 1) + 1


def _check_qubit(qubit: int, nqubits: int) -> None:
    if not 1 <= qubit <= nqubits:
        raise ValueError(f"qubit index {qubit} out of range 1..{nqubits}")


class SparsePoly:
    """Sparse polynomial in the 2N pair variables of an N-qubit register.

    Terms are stored as a dict mapping exponent tuples (length 2N, entries
    >= 0) to complex coefficients.  Coefficients with magnitude <= ZERO_TOL
    are pruned on construction and after every arithmetic operation, so a
    polynomial that cancels to zero compares equal to `SparsePoly.zero`.
    """

    __slots__ = ("nqubits", "terms")

    def __init__(self, nqubits: int, terms: dict[tuple[int, ...], complex] | None = None):
        if nqubits < 1:
            raise ValueError(f"nqubits must be >= 1, got {nqubits}")
        self.nqubits = nqubits
        nvars = 2 * nqubits
        clean: dict[tuple[int, ...], complex] = {}
        for expo, coeff in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != nvars:
                raise ValueError(
                    f"exponent tuple {expo} has length {len(expo)}, expected {nvars}")
            if any(e < 0 for e in expo):
                raise ValueError(f"negative exponent in {expo}")
            c = complex(coeff)
            if abs(c) > ZERO_TOL:
                clean[expo] = clean.get(expo, 0j) + c
                if abs(clean[expo]) <= ZERO_TOL:
                    del clean[expo]
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nqubits: int) -> "SparsePoly":
        return cls(nqubits, {})

    @classmethod
    def one(cls, nqubits: int) -> "SparsePoly":
        return cls(nqubits, {(0,) * (2 * nqubits): 1.0 + 0j})

    @classmethod
    def monomial(cls, nqubits: int, exponents: tuple[int, ...],
                 coeff: complex = 1.0 + 0j) -> "SparsePoly":
        return cls(nqubits, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, nqubits: int, index: int) -> "SparsePoly":
        """The polynomial z_index (flat variable index 0..2N-1)."""
        if not 0 <= index < 2 * nqubits:
            raise ValueError(f"variable index {index} out of range 0..{2*nqubits - 1}")
        expo = [0] * (2 * nqubits)
        expo[index] = 1
        return cls(nqubits, {tuple(expo): 1.0 + 0j})

    # -- algebra ------------------------------------------------------

    def _require_same_register(self, other: "SparsePoly") -> None:
        if self.nqubits != other.nqubits:
            raise ValueError(
                f"register mismatch: {self.nqubits} vs {other.nqubits} qubits")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._require_same_register(other)
        out = dict(self.terms)
        for expo, c in other.terms.items():
            out[expo] = out.get(expo, 0j) + c
        return SparsePoly(self.nqubits, out)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-1.0) * other

    def __neg__(self) -> "SparsePoly":
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, SparsePoly):
            self._require_same_register(other)
            out: dict[tuple[int, ...], complex] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    key = tuple(x + y for x, y in zip(e1, e2))
                    out[key] = out.get(key, 0j) + c1 * c2
            return SparsePoly(self.nqubits, out)
        return SparsePoly(self.nqubits,
                          {e: complex(other) * c for e, c in self.terms.items()})

    def __rmul__(self, scalar) -> "SparsePoly":
        return self * scalar

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = SparsePoly.one(self.nqubits)
        for _ in range(k):
            out = out * self
        return out

    # -- queries ------------------------------------------------------

    def coeff(self, exponents: tuple[int, ...]) -> complex:
        return self.terms.get(tuple(exponents), 0j)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nqubits == other.nqubits and self.terms == other.terms

    def __hash__(self):
        raise TypeError("SparsePoly is mutable-by-convention and unhashable")

    def isclose(self, other: "SparsePoly", tol: float = 1e-12) -> bool:
        """Coefficient-wise comparison over the union of exponent sets."""
        self._require_same_register(other)
        for expo in self.terms.keys() | other.terms.keys():
            if abs(self.terms.get(expo, 0j) - other.terms.get(expo, 0j)) > tol:
                return False
        return True

    def max_coeff_diff(self, other: "SparsePoly") -> float:
        self._require_same_register(other)
        keys = self.terms.keys() | other.terms.keys()
        if not keys:
            return 0.0
        return max(abs(self.terms.get(e, 0j) - other.terms.get(e, 0j)) for e in keys)

    def __repr__(self) -> str:
        if not self.terms:
            return f"SparsePoly(n={self.nqubits}, 0)"
        parts = []
        for expo in sorted(self.terms):
            c = self.terms[expo]
            mono = "*".join(f"z{k}^{e}" if e > 1 else f"z{k}"
                            for k, e in enumerate(expo) if e) or "1"
            parts.append(f"({c:.6g})*{mono}")
        return f"SparsePoly(n={self.nqubits}, " + " + ".join(parts) + ")"


class HoloState:
    """An N-qubit state held as its basis-amplitude map.

    This is the decoded form of a physical polynomial: bit string -> complex
    amplitude, with near-zero amplitudes pruned.  `is_normalized` records
    whether the 2-norm is within NORM_TOL of one at construction.
    """

    __slots__ = ("nqubits", "amplitudes", "is_normalized")

    def __init__(self, nqubits: int, amplitudes: dict[str, complex]):
        if nqubits < 1:
            raise ValueError(f"nqubits must be >= 1, got {nqubits}")
        self.nqubits = nqubits
        clean: dict[str, complex] = {}
        for bits, amp in amplitudes.items():
            if len(bits) != nqubits or any(ch not in "01" for ch in bits):
                raise ValueError(
                    f"bad basis label {bits!r} for {nqubits} qubit(s)")
            c = complex(amp)
            if abs(c) > ZERO_TOL:
                clean[bits] = c
        self.amplitudes = clean
        self.is_normalized = abs(self.norm() - 1.0) <= NORM_TOL

    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.amplitudes.values()))

    def to_vector(self) -> np.ndarray:
        """Flat amplitude vector of length 2^N, index = bit string as binary."""
        v = np.zeros(2 ** self.nqubits, dtype=complex)
        for bits, amp in self.amplitudes.items():
            v[int(bits, 2)] = amp
        return v

    @classmethod
    def from_vector(cls, amplitudes: np.ndarray) -> "HoloState":
        return encode_state(amplitudes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HoloState):
            return NotImplemented
        return self.nqubits == other.nqubits and self.amplitudes == other.amplitudes

    def __hash__(self):
        raise TypeError("HoloState is unhashable")

    def __repr__(self) -> str:
        amps = ", ".join(f"|{b}>: {c:.6g}" for b, c in sorted(self.amplitudes.items()))
        return f"HoloState(n={self.nqubits}, {{{amps}}})"


# -- encoding and decoding -------------------------------------------


def basis_exponents(bits: str) -> tuple[int, ...]:
    """Exponent tuple of the monomial encoding a basis bit string."""
    expo = [0] * (2 * len(bits))
    for j, ch in enumerate(bits, start=1):
        if ch not in "01":
            raise ValueError(f"bad basis label {bits!r}")
        expo[a_index(j) + BASIS.mode_offset(int(ch))] = 1
    return tuple(expo)


def encode_basis(bits: str) -> SparsePoly:
    """Monomial for one computational basis state, e.g. "01" -> z_a1 * z_b2."""
    if not bits:
        raise ValueError("empty basis label")
    return SparsePoly.monomial(len(bits), basis_exponents(bits))


def encode_state(amplitudes: np.ndarray | list | dict[str, complex],
                 nqubits: int | None = None) -> HoloState:
    """Build a HoloState from a flat big-endian amplitude vector or a dict."""
    if isinstance(amplitudes, dict):
        if nqubits is None:
            if not amplitudes:
                raise ValueError("cannot infer qubit count from an empty dict")
            nqubits = len(next(iter(amplitudes)))
        return HoloState(nqubits, amplitudes)
    v = np.asarray(amplitudes, dtype=complex).ravel()
    n = int(round(math.log2(v.size))) if v.size else 0
    if v.size < 2 or 2 ** n != v.size:
        raise ValueError(f"amplitude vector length {v.size} is not a power of two >= 2")
    amps = {format(k, f"0{n}b"): v[k] for k in range(v.size) if abs(v[k]) > ZERO_TOL}
    return HoloState(n, amps)


def to_poly(state: HoloState) -> SparsePoly:
    """Encode a state as its physical polynomial."""
    terms = {basis_exponents(bits): amp for bits, amp in state.amplitudes.items()}
    return SparsePoly(state.nqubits, terms)


def _exponents_to_bits(expo: tuple[int, ...], nqubits: int) -> str:
    bits = []
    for j in range(1, nqubits + 1):
        ea, eb = expo[a_index(j)], expo[b_index(j)]
        if (ea, eb) == (1, 0):
            bits.append("0")
        elif (ea, eb) == (0, 1):
            bits.append("1")
        else:
            raise NonPhysicalPolynomialError(
                f"monomial with exponents {expo} is not one-hot on qubit {j}: "
                f"pair degrees ({ea}, {eb})")
    return "".join(bits)


def from_poly(poly: SparsePoly) -> HoloState:
    """Decode a physical polynomial back to amplitudes.

    Every stored monomial must put exactly degree one on each qubit pair,
    split as z_a^1 z_b^0 or z_a^0 z_b^1; anything else (a constant term,
    z_a^2, a mixed z_a z_b factor) names the offending exponent tuple in a
    NonPhysicalPolynomialError.
    """
    amps: dict[str, complex] = {}
    for expo, coeff in poly.terms.items():
        amps[_exponents_to_bits(expo, poly.nqubits)] = coeff
    return HoloState(poly.nqubits, amps)


def check_homogeneity(poly: SparsePoly, qubit: int) -> bool:
    """True when the Euler operator of a qubit pair fixes the polynomial.

    Equivalent statement: every stored monomial has total degree one in
    (z_a, z_b) of that qubit.  The zero polynomial fails (it carries no
    degree-one content to be an eigenvector of eigenvalue one).
    """
    _check_qubit(qubit, poly.nqubits)
    if poly.is_zero:
        return False
    ia, ib = a_index(qubit), b_index(qubit)
    return all(expo[ia] + expo[ib] == 1 for expo in poly.terms)


def check_all_homogeneity(poly: SparsePoly) -> bool:
    """Degree-one check across every qubit pair at once."""
    return all(check_homogeneity(poly, j) for j in range(1, poly.nqubits + 1))


def sb_inner_product(f: SparsePoly, g: SparsePoly) -> complex:
    """Gaussian-measure inner product, antilinear in the first argument.

    Monomials are orthogonal with squared norm prod_k e_k!, so the sum runs
    over shared exponent tuples only.  On physical polynomials every
    factorial is 1 and this is the plain amplitude inner product.
    """
    f._require_same_register(g)
    total = 0j
    small, big = (f.terms, g.terms) if len(f.terms) <= len(g.terms) else (g.terms, f.terms)
    for expo in small:
        if expo in big:
            weight = 1
            for e in expo:
                weight *= math.factorial(e)
            total += f.terms[expo].conjugate() * g.terms[expo] * weight
    return total
