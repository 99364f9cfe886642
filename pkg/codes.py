# codes.py
"""
File: codes.py
Function:
    Catalog of the stabilizer and subsystem codes the memory models are built from,
    plus everything derived from a code definition: syndromes, printed syndrome tables,
    separability, classification of arbitrary Pauli errors against the gauge structure,
    and logical-state projectors.

Functions Contained:
    - catalog_get / catalog_names: Code lookup.
    - syndrome / syndrome_table: Commutation pattern of an error against the generators.
    - is_separable: Split of the generators into X-locating and Z-locating subsets.
    - classify_operator: HARMLESS / CORRECTABLE / UNCORRECTABLE with a factorization witness.
    - logical_projector: Symbolic projector onto a logical state (identity on gauge).
    - check_code: Direct verification of the StabilizerCode invariants.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from pauli import (
    PauliString,
    SymplecticBasis,
    apply_pauli,
    commutes,
    group_rank,
    multiply,
    pauli_from_string,
    single,
)

logger = logging.getLogger(__name__)

LOGICAL_STATES = ("zero", "one", "plus", "minus")


class CodeError(ValueError):
    """Raised for unknown catalog names and register-size mismatches."""


@dataclass(frozen=True)
class StabilizerCode:
    """
    Stabilizer (or subsystem) code. Stabilizer order fixes relay indexing: relay n
    latches the value of stabilizers[n-1].
    """

    name: str
    n_qubits: int
    stabilizers: tuple
    logical_x: PauliString
    logical_z: PauliString
    correctable_errors: tuple
    gauge_generators: tuple = ()
    naive_routes: tuple = ()  # per stabilizer, 1-based scattering order
    description: str = ""

    @property
    def n_stabilizers(self) -> int:
        return len(self.stabilizers)

    @property
    def is_subsystem(self) -> bool:
        return len(self.gauge_generators) > 0

    @property
    def harmless_generators(self) -> tuple:
        return tuple(self.gauge_generators) + tuple(self.stabilizers)

    def stabilizer_index(self, generator: PauliString) -> Optional[int]:
        """1-based index of `generator` among the stabilizers (phase ignored)."""
        for n, m in enumerate(self.stabilizers, start=1):
            if m.symplectic == generator.symplectic:
                return n
        return None

    def parse(self, text: str) -> PauliString:
        return pauli_from_string(text, self.n_qubits)


@dataclass(frozen=True)
class SyndromeVector:
    """Ordered +1/-1 stabilizer values; +1 <-> relay h, -1 <-> relay g."""

    values: tuple

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.values):
            raise CodeError(f"Syndrome entries must be +1 or -1, got {self.values}.")

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def restricted(self, indices) -> "SyndromeVector":
        """Entries at the given 0-based stabilizer indices."""
        return SyndromeVector(tuple(self.values[i] for i in indices))

    def render(self) -> str:
        return " ".join("+" if v == 1 else "-" for v in self.values)


class ErrorTag(str, Enum):
    HARMLESS = "HARMLESS"
    CORRECTABLE = "CORRECTABLE"
    UNCORRECTABLE = "UNCORRECTABLE"


@dataclass(frozen=True)
class ErrorClass:
    """
    Classification of an operator. For CORRECTABLE the witness is
    (designed error E, remainder E*P in the gauge/stabilizer group); for HARMLESS the
    error slot is None and the remainder is the operator itself.
    """

    tag: ErrorTag
    error: Optional[PauliString] = None
    remainder: Optional[PauliString] = None

    @property
    def factorization(self) -> Optional[tuple]:
        if self.tag is ErrorTag.UNCORRECTABLE:
            return None
        return (self.error, self.remainder)


@dataclass(frozen=True)
class PauliProjector:
    """Product of commuting factors (I + s*P)/2 with s = +1 or -1."""

    n_qubits: int
    factors: tuple = field(default_factory=tuple)  # ((sign, PauliString), ...)

    @property
    def rank(self) -> int:
        return 2 ** (self.n_qubits - group_rank([p for _, p in self.factors]))

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """Applies the projector to a register-space vector (or to each column of a matrix)."""
        out = np.array(vector, dtype=complex)
        for sign, p in self.factors:
            out = 0.5 * (out + sign * apply_pauli(p, out))
        return out

    def to_matrix(self) -> np.ndarray:
        return self.apply(np.eye(2 ** self.n_qubits, dtype=complex))


# --- Catalog ---


def _parse_all(specs, n):
    return tuple(pauli_from_string(s, n) for s in specs)


def _single_errors(n: int) -> tuple:
    return tuple(single(letter, q, n) for letter in "XZY" for q in range(1, n + 1))


def _five_qubit() -> StabilizerCode:
    n = 5
    return StabilizerCode(
        name="five_qubit",
        n_qubits=n,
        stabilizers=_parse_all(["Z2X3X4Z5", "Z1Z3X4X5", "X1Z2Z4X5", "X1X2Z3Z5"], n),
        logical_x=pauli_from_string("X1X2X3X4X5", n),
        logical_z=pauli_from_string("Z1Z2Z3Z4Z5", n),
        correctable_errors=_single_errors(n),
        naive_routes=((5, 4, 3, 2), (5, 4, 3, 1), (5, 4, 2, 1), (5, 3, 2, 1)),
        description="Perfect [[5,1,3]] code; not separable.",
    )


def _steane_seven() -> StabilizerCode:
    n = 7
    return StabilizerCode(
        name="steane_seven",
        n_qubits=n,
        stabilizers=_parse_all(
            ["X1X2X3X4", "X1X2X5X6", "X1X3X5X7", "Z1Z2Z3Z4", "Z1Z2Z5Z6", "Z1Z3Z5Z7"], n
        ),
        logical_x=pauli_from_string("X1X2X3X4X5X6X7", n),
        logical_z=pauli_from_string("Z1Z2Z3Z4Z5Z6Z7", n),
        correctable_errors=_single_errors(n),
        naive_routes=((4, 3, 2, 1), (6, 5, 2, 1), (7, 5, 3, 1)) * 2,
        description="Seven-qubit CSS code; separable.",
    )


def _bacon_shor_nine() -> StabilizerCode:
    # qubits on a 3x3 grid, row-major: rows (1,2,3), (4,5,6), (7,8,9)
    n = 9
    z_gauge = ["Z1Z2", "Z2Z3", "Z4Z5", "Z5Z6", "Z7Z8", "Z8Z9"]
    x_gauge = ["X1X4", "X4X7", "X2X5", "X5X8", "X3X6", "X6X9"]
    return StabilizerCode(
        name="bacon_shor_nine",
        n_qubits=n,
        stabilizers=_parse_all(
            ["X1X2X3X4X5X6", "X4X5X6X7X8X9", "Z1Z2Z4Z5Z7Z8", "Z2Z3Z5Z6Z8Z9"], n
        ),
        gauge_generators=_parse_all(z_gauge + x_gauge, n),
        logical_x=pauli_from_string("X1X2X3", n),
        logical_z=pauli_from_string("Z1Z4Z7", n),
        correctable_errors=_single_errors(n),
        naive_routes=((1, 2, 3, 6, 5, 4), (4, 5, 6, 9, 8, 7), (8, 5, 2, 1, 4, 7), (9, 6, 3, 2, 5, 8)),
        description="Nine-qubit Bacon-Shor subsystem code; separable, 4 gauge qubits.",
    )


def _bitflip_three() -> StabilizerCode:
    n = 3
    return StabilizerCode(
        name="bitflip_three",
        n_qubits=n,
        stabilizers=_parse_all(["Z1Z2", "Z2Z3"], n),
        logical_x=pauli_from_string("X1X2X3", n),
        logical_z=pauli_from_string("Z1Z2Z3", n),
        correctable_errors=tuple(single("X", q, n) for q in range(1, n + 1)),
        naive_routes=((2, 1), (3, 2)),
        description="Three-qubit bit-flip code; protects against X errors only.",
    )


_CATALOG = {
    "five_qubit": _five_qubit,
    "steane_seven": _steane_seven,
    "bacon_shor_nine": _bacon_shor_nine,
    "bitflip_three": _bitflip_three,
}


def catalog_names() -> list:
    return list(_CATALOG)


@lru_cache(maxsize=None)
def catalog_get(name: str) -> StabilizerCode:
    """Returns the fully populated catalog code `name`."""
    try:
        factory = _CATALOG[name]
    except KeyError:
        raise CodeError(f"Unknown code '{name}'. Known codes: {', '.join(_CATALOG)}.") from None
    return factory()


# --- Syndromes ---


def _check_size(code: StabilizerCode, p: PauliString) -> None:
    if p.n_qubits != code.n_qubits:
        raise CodeError(
            f"Operator acts on {p.n_qubits} qubits but {code.name} has {code.n_qubits}."
        )


def syndrome(code: StabilizerCode, error: PauliString) -> SyndromeVector:
    """Entry n is +1 if `error` commutes with M_n, -1 otherwise."""
    _check_size(code, error)
    return SyndromeVector(tuple(1 if commutes(error, m) else -1 for m in code.stabilizers))


def syndrome_table(code: StabilizerCode) -> list:
    """Rows (label, SyndromeVector) ordered X1..XQ, Z1..ZQ, Y1..YQ."""
    rows = []
    for letter in "XZY":
        for q in range(1, code.n_qubits + 1):
            error = single(letter, q, code.n_qubits)
            rows.append((error.label(), syndrome(code, error)))
    return rows


def render_syndrome_table(code: StabilizerCode) -> str:
    """One row per line, "X1 + + + - - -"; the fixture format."""
    return "\n".join(f"{label} {s.render()}" for label, s in syndrome_table(code))


def is_separable(code: StabilizerCode) -> Optional[tuple]:
    """
    Purpose: Detects whether disjoint generator subsets mediate X and Z syndrome extraction.
    Outputs: (S_X, S_Z) as tuples of 0-based stabilizer indices, where S_X holds the
             Z-type generators (they locate X errors) and S_Z the X-type ones; None when a
             generator mixes X and Z letters.
    """
    locate_x, locate_z = [], []
    for n, m in enumerate(code.stabilizers):
        if m.is_z_type:
            locate_x.append(n)
        elif m.is_x_type:
            locate_z.append(n)
        else:
            return None
    return tuple(locate_x), tuple(locate_z)


# --- Classification ---


@lru_cache(maxsize=None)
def _harmless_basis(code: StabilizerCode) -> SymplecticBasis:
    return SymplecticBasis([g.symplectic for g in code.harmless_generators])


def classify_operator(code: StabilizerCode, p: PauliString) -> ErrorClass:
    """
    Purpose: Classifies an operator against the gauge structure.
             HARMLESS: p lies in the group generated by gauge generators and stabilizers.
             CORRECTABLE: p = E * (harmless element) for a designed correctable error E.
                          If p is itself a designed error it is its own witness; otherwise
                          the first such E in catalog order is.
             UNCORRECTABLE: otherwise.
    """
    _check_size(code, p)
    harmless = _harmless_basis(code)
    if harmless.contains(p.symplectic):
        return ErrorClass(ErrorTag.HARMLESS, None, p.unsigned())
    target = p.unsigned()
    # exact match first; sorted() is stable so catalog order is kept otherwise
    for error in sorted(code.correctable_errors, key=lambda e: e.unsigned() != target):
        remainder = multiply(error, p).unsigned()
        if harmless.contains(remainder.symplectic):
            return ErrorClass(ErrorTag.CORRECTABLE, error, remainder)
    return ErrorClass(ErrorTag.UNCORRECTABLE)


def describe_class(code: StabilizerCode, error_class: ErrorClass) -> str:
    """Short witness text, e.g. "(= Z4 * gauge[Z7Z8])"."""
    tag = error_class.tag
    if tag is ErrorTag.UNCORRECTABLE:
        return ""
    group_word = "gauge" if code.is_subsystem else "stabilizer"
    if tag is ErrorTag.HARMLESS:
        return f"({group_word})"
    if error_class.remainder.is_identity:
        return f"(= {error_class.error.label()})"
    return f"(= {error_class.error.label()} * {group_word}[{error_class.remainder.label()}])"


# --- Projectors ---


def logical_projector(code: StabilizerCode, logical_state: str) -> PauliProjector:
    """
    Purpose: Projector onto the codespace with the requested logical state. For subsystem
             codes it acts as the identity on the gauge qubits.
    Inputs:
        - logical_state (str): "zero", "one", "plus" or "minus".
    Outputs: PauliProjector with one factor per stabilizer plus the logical factor.
    """
    if logical_state not in LOGICAL_STATES:
        raise CodeError(f"Unknown logical state '{logical_state}'. Use one of {LOGICAL_STATES}.")
    logical = {
        "zero": (1, code.logical_z),
        "one": (-1, code.logical_z),
        "plus": (1, code.logical_x),
        "minus": (-1, code.logical_x),
    }[logical_state]
    factors = tuple((1, m) for m in code.stabilizers) + (logical,)
    return PauliProjector(code.n_qubits, factors)


def check_code(code: StabilizerCode) -> list:
    """
    Purpose: Verifies the StabilizerCode invariants by direct computation.
    Outputs: List of violation messages; empty when the code is consistent.
    """
    problems = []
    stabs = code.stabilizers
    for i, a in enumerate(stabs):
        for b in stabs[i + 1:]:
            if not commutes(a, b):
                problems.append(f"stabilizers {a} and {b} anticommute")
    for g in code.gauge_generators:
        for m in stabs:
            if not commutes(g, m):
                problems.append(f"gauge {g} anticommutes with stabilizer {m}")
    for name, logical in (("logical_x", code.logical_x), ("logical_z", code.logical_z)):
        for m in stabs:
            if not commutes(logical, m):
                problems.append(f"{name} anticommutes with stabilizer {m}")
        for g in code.gauge_generators:
            if not commutes(logical, g):
                problems.append(f"{name} anticommutes with gauge {g}")
    if commutes(code.logical_x, code.logical_z):
        problems.append("logical_x and logical_z commute")

    errors = code.correctable_errors
    for i, e in enumerate(errors):
        for f in errors[i + 1:]:
            if syndrome(code, e) == syndrome(code, f):
                if classify_operator(code, multiply(e, f)).tag is not ErrorTag.HARMLESS:
                    problems.append(f"{e} and {f} share a syndrome but differ on the logical subsystem")
    if problems:
        logger.warning("Code %s fails %d invariant checks.", code.name, len(problems))
    return problems
