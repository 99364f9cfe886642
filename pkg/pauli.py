# pauli.py
"""
File: pauli.py
Function:
    Phase-tracked Pauli-string algebra over Q register qubits in symplectic
    (X-bits, Z-bits, phase) form. Every code, model and routing calculation in the
    project is expressed with these values.

    Convention: a PauliString with bits (x_j, z_j) and phase p is the operator
    i^p * sigma_1 (x) ... (x) sigma_Q, where sigma = X for (1, 0), Z for (0, 1) and
    Y for (1, 1), with Y = iXZ. Qubit indices are 1-based in text ("Z2X3X4Z5") and
    0-based in the bit masks; bit j of a mask is qubit j + 1.

Functions Contained:
    - pauli_from_string: Parses the textual notation.
    - multiply: Phase-exact product of two strings.
    - commutes: Symplectic commutation test.
    - in_group / decompose: GF(2) membership test with a generator witness.
    - to_matrix: Dense matrix for oracle checks.
"""

import re
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np

_TOKEN = re.compile(r"([IXYZ])(\d+)")
_PHASE_PREFIX = {0: "", 1: "i*", 2: "-", 3: "-i*"}

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliError(ValueError):
    """Raised for malformed Pauli text or operands of different sizes."""


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli operator with a power-of-i phase."""

    n_qubits: int
    x_bits: int = 0
    z_bits: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise PauliError("n_qubits must be positive.")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise PauliError(f"Bit masks do not fit in {self.n_qubits} qubits.")
        object.__setattr__(self, "phase", self.phase % 4)

    # --- Views ---

    def letter(self, qubit: int) -> str:
        """Letter acting on the 1-based qubit index."""
        x = (self.x_bits >> (qubit - 1)) & 1
        z = (self.z_bits >> (qubit - 1)) & 1
        return "IZXY"[(x << 1) | z]

    @property
    def support(self) -> tuple:
        """1-based indices of the non-identity positions, ascending."""
        mask = self.x_bits | self.z_bits
        return tuple(j + 1 for j in range(self.n_qubits) if (mask >> j) & 1)

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def symplectic(self) -> int:
        """Unsigned operator packed as one integer: X-bits above Z-bits."""
        return (self.x_bits << self.n_qubits) | self.z_bits

    @property
    def is_x_type(self) -> bool:
        return self.z_bits == 0 and self.x_bits != 0

    @property
    def is_z_type(self) -> bool:
        return self.x_bits == 0 and self.z_bits != 0

    def unsigned(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, 0)

    def factor(self, qubit: int) -> "PauliString":
        """Single-qubit factor of this string at a 1-based qubit, phase 0."""
        bit = 1 << (qubit - 1)
        return PauliString(self.n_qubits, self.x_bits & bit, self.z_bits & bit, 0)

    def restrict(self, qubits: Sequence[int]) -> "PauliString":
        """Product of the single-qubit factors at the given qubits, phase 0."""
        mask = 0
        for q in qubits:
            mask |= 1 << (q - 1)
        return PauliString(self.n_qubits, self.x_bits & mask, self.z_bits & mask, 0)

    def label(self, order: Optional[Sequence[int]] = None) -> str:
        """Unsigned text form, ascending qubit order unless `order` is given; "I" for the identity."""
        if self.is_identity:
            return "I"
        qubits = self.support if order is None else [q for q in order if q in self.support]
        return "".join(f"{self.letter(q)}{q}" for q in qubits)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.label()

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)


def identity(n_qubits: int) -> PauliString:
    return PauliString(n_qubits)


def single(letter: str, qubit: int, n_qubits: int) -> PauliString:
    """Single-qubit Pauli `letter` on the 1-based `qubit`."""
    return pauli_from_string(f"{letter}{qubit}", n_qubits)


def pauli_from_string(spec: str, n_qubits: int) -> PauliString:
    """
    Purpose: Parses the concatenated notation, e.g. "Z2X3X4Z5". Letters may appear
             in any qubit order; "" and "I" denote the identity.
    Inputs:
        - spec (str): Uppercase letter + 1-based index tokens.
        - n_qubits (int): Register size.
    Outputs: PauliString with phase 0.
    """
    text = spec.strip()
    if text in ("", "I"):
        return PauliString(n_qubits)

    x_bits = z_bits = 0
    seen = set()
    position = 0
    for match in _TOKEN.finditer(text):
        if match.start() != position:
            raise PauliError(f"Malformed Pauli token near '{text[position:]}' in '{spec}'.")
        position = match.end()
        letter, index = match.group(1), int(match.group(2))
        if not 1 <= index <= n_qubits:
            raise PauliError(f"Qubit index {index} out of range 1..{n_qubits} in '{spec}'.")
        if index in seen:
            raise PauliError(f"Qubit {index} appears twice in '{spec}'.")
        seen.add(index)
        bit = 1 << (index - 1)
        if letter in ("X", "Y"):
            x_bits |= bit
        if letter in ("Z", "Y"):
            z_bits |= bit
    if position != len(text):
        raise PauliError(f"Malformed Pauli token near '{text[position:]}' in '{spec}'.")
    return PauliString(n_qubits, x_bits, z_bits, 0)


def _check_sizes(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise PauliError(f"Size mismatch: {p.n_qubits} vs {q.n_qubits} qubits.")


def _site_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    # power of i picked up by sigma(x1,z1) * sigma(x2,z2) with Y = iXZ
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """
    Purpose: Phase-exact product p*q.
    Inputs:
        - p, q (PauliString): Operands of equal size.
    Outputs: PauliString with XOR-ed bits and the phase updated mod 4.
    """
    _check_sizes(p, q)
    exponent = p.phase + q.phase
    overlap = (p.x_bits | p.z_bits) & (q.x_bits | q.z_bits)
    j = 0
    while overlap:
        if overlap & 1:
            exponent += _site_exponent(
                (p.x_bits >> j) & 1, (p.z_bits >> j) & 1,
                (q.x_bits >> j) & 1, (q.z_bits >> j) & 1,
            )
        overlap >>= 1
        j += 1
    return PauliString(p.n_qubits, p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits, exponent)


def product(paulis: Sequence[PauliString], n_qubits: int) -> PauliString:
    return reduce(multiply, paulis, PauliString(n_qubits))


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form of p and q is even."""
    _check_sizes(p, q)
    form = (p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()
    return form % 2 == 0


class SymplecticBasis:
    """Row-reduced GF(2) span of symplectic vectors, remembering which generators built each row."""

    def __init__(self, vectors: Sequence[int]):
        self.rows = {}  # pivot bit -> (vector, generator combination mask)
        for index, vector in enumerate(vectors):
            residual, combo = self.reduce(vector)
            combo ^= 1 << index
            if residual:
                self.rows[residual.bit_length() - 1] = (residual, combo)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vector: int) -> bool:
        return self.reduce(vector)[0] == 0

    def reduce(self, vector: int) -> tuple:
        combo = 0
        while vector:
            pivot = vector.bit_length() - 1
            row = self.rows.get(pivot)
            if row is None:
                break
            vector ^= row[0]
            combo ^= row[1]
        if vector == 0:
            return 0, combo
        # keep reducing lower bits so the residual is canonical
        residual = 0
        while vector:
            pivot = vector.bit_length() - 1
            row = self.rows.get(pivot)
            if row is None:
                residual |= 1 << pivot
                vector ^= 1 << pivot
            else:
                vector ^= row[0]
                combo ^= row[1]
        return residual, combo


def decompose(p: PauliString, generators: Sequence[PauliString]) -> Optional[tuple]:
    """
    Purpose: Expresses p, up to phase, as a product of generators by Gaussian elimination
             over GF(2) on symplectic vectors.
    Outputs: Tuple of generator indices whose product equals p up to phase, or None when
             p is outside the generated group.
    """
    for g in generators:
        _check_sizes(p, g)
    basis = SymplecticBasis([g.symplectic for g in generators])
    residual, combo = basis.reduce(p.symplectic)
    if residual:
        return None
    return tuple(i for i in range(len(generators)) if (combo >> i) & 1)


def in_group(p: PauliString, generators: Sequence[PauliString]) -> bool:
    """Membership of p in the group generated by `generators`, ignoring phase."""
    return decompose(p, generators) is not None


def group_rank(generators: Sequence[PauliString]) -> int:
    """Number of independent generators (phase ignored)."""
    return SymplecticBasis([g.symplectic for g in generators]).rank


def to_matrix(p: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix; qubit 1 is the most significant tensor factor."""
    matrix = np.array([[1.0 + 0j]])
    for q in range(1, p.n_qubits + 1):
        matrix = np.kron(matrix, _SINGLE[p.letter(q)])
    return (1j ** p.phase) * matrix


def index_masks(p: PauliString, total_qubits: Optional[int] = None) -> tuple:
    """
    (flip, sign) masks over basis-state indices of a `total_qubits`-bit register in which
    qubit 1 is the most significant bit; p occupies the leading n_qubits positions.
    """
    total = total_qubits if total_qubits is not None else p.n_qubits
    flip = sign = 0
    for q in p.support:
        bit = 1 << (total - q)
        if (p.x_bits >> (q - 1)) & 1:
            flip |= bit
        if (p.z_bits >> (q - 1)) & 1:
            sign |= bit
    return flip, sign


def apply_pauli(p: PauliString, array: np.ndarray) -> np.ndarray:
    """Matrix-free action on the leading axis (length 2^n) of a vector or matrix."""
    dim = 2 ** p.n_qubits
    flip, sign = index_masks(p)
    source = np.arange(dim) ^ flip
    parity = np.bitwise_count(source & sign) & 1
    coefficient = (1j ** ((p.phase + p.y_count) % 4)) * (1 - 2 * parity.astype(float))
    shape = (dim,) + (1,) * (np.ndim(array) - 1)
    return coefficient.reshape(shape) * np.asarray(array)[source]
