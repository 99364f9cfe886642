# kernels.py
"""
File: kernels.py
Function:
    Matrix-free operators over the joint register (x) relay basis. Every symbolic model
    operator compiles to a short list of (flip mask, weight vector) pairs:

        (T psi)[c] = sum_f w_f[c] * psi[c ^ f]

    Pauli X/Y factors and relay raising/lowering operators contribute to the flip mask; Z/Y
    signs, phases and relay projectors contribute to the weights. Products and adjoints stay
    in this form, so L^dagger L and the effective Hamiltonian are compiled once per model.

    Basis order: register qubit 1 is the most significant bit, relays follow with relay N as
    the least significant bit; relay g = 0, h = 1.

Functions Contained:
    - StateVector: Amplitudes plus the register/relay split.
    - CompiledOperator: compile, apply, compose, adjoint, dense export, infinity-norm bound.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from pauli import index_masks


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    n_register: int
    n_relays: int

    def __post_init__(self):
        expected = 2 ** (self.n_register + self.n_relays)
        if self.amplitudes.shape != (expected,):
            raise ValueError(
                f"State has shape {self.amplitudes.shape}; expected ({expected},) for "
                f"{self.n_register} register qubits and {self.n_relays} relays."
            )

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def register_matrix(self) -> np.ndarray:
        """Amplitudes as a (2^Q, 2^N) matrix: rows index the register, columns the relays."""
        return self.amplitudes.reshape(2 ** self.n_register, 2 ** self.n_relays)

    def normalized(self) -> "StateVector":
        return StateVector(self.amplitudes / self.norm, self.n_register, self.n_relays)


class CompiledOperator:
    """Sum over flip masks f of diag(w_f) P_f, where (P_f psi)[c] = psi[c ^ f]."""

    def __init__(self, dimension: int, parts: Optional[dict] = None):
        self.dimension = dimension
        self._index = np.arange(dimension)
        self.parts = {}
        for flip, weights in (parts or {}).items():
            self._accumulate(flip, weights)
        self._prune()

    # --- Construction ---

    def _accumulate(self, flip: int, weights: np.ndarray) -> None:
        if flip in self.parts:
            self.parts[flip] = self.parts[flip] + weights
        else:
            self.parts[flip] = np.asarray(weights, dtype=complex)

    def _prune(self) -> None:
        if not self.parts:
            self._sources = {}
            return
        scale = max(float(np.max(np.abs(w))) for w in self.parts.values())
        tolerance = 1e-14 * scale
        self.parts = {f: w for f, w in sorted(self.parts.items()) if np.max(np.abs(w)) > tolerance}
        self._sources = {f: self._index ^ f for f in self.parts}

    @classmethod
    def from_terms(cls, terms, scale: complex, n_register: int, n_relays: int) -> "CompiledOperator":
        """Compiles scale * sum(ModelTerm) into flip/weight form."""
        total = n_register + n_relays
        dimension = 2 ** total
        index = np.arange(dimension)
        parts = {}
        for term in terms:
            relay_flip = 0
            relay_weight = np.ones(dimension)
            for spec in term.relay_parts:
                bit = 1 << (n_relays - spec.relay_index)
                excited = (index & bit) != 0
                # weights are evaluated at the output index c
                if spec.kind in ("sigma_plus", "proj_h"):
                    relay_weight = relay_weight * excited
                else:
                    relay_weight = relay_weight * ~excited
                if spec.kind in ("sigma_plus", "sigma_minus"):
                    relay_flip |= bit

            register_part = term.register_part or ((1, None),)
            for sign, pauli in register_part:
                if pauli is None:
                    flip, weights = relay_flip, relay_weight.astype(complex)
                else:
                    pauli_flip, z_mask = index_masks(pauli, total)
                    flip = pauli_flip ^ relay_flip
                    source = index ^ flip
                    parity = np.bitwise_count(source & z_mask) & 1
                    phase = 1j ** ((pauli.phase + pauli.y_count) % 4)
                    weights = phase * (1 - 2 * parity.astype(float)) * relay_weight
                coefficient = complex(scale) * complex(term.coefficient) * sign
                if flip in parts:
                    parts[flip] = parts[flip] + coefficient * weights
                else:
                    parts[flip] = coefficient * weights
        return cls(dimension, parts)

    @classmethod
    def from_model_operator(cls, operator, n_register: int, n_relays: int) -> "CompiledOperator":
        return cls.from_terms(operator.terms, operator.scale, n_register, n_relays)

    # --- Algebra ---

    def _check(self, other: "CompiledOperator") -> None:
        if other.dimension != self.dimension:
            raise ValueError(f"Dimension mismatch: {self.dimension} vs {other.dimension}.")

    def __add__(self, other: "CompiledOperator") -> "CompiledOperator":
        self._check(other)
        parts = dict(self.parts)
        for flip, weights in other.parts.items():
            parts[flip] = parts[flip] + weights if flip in parts else weights
        return CompiledOperator(self.dimension, parts)

    def scaled(self, factor: complex) -> "CompiledOperator":
        return CompiledOperator(self.dimension, {f: factor * w for f, w in self.parts.items()})

    def compose(self, other: "CompiledOperator") -> "CompiledOperator":
        """self @ other: (A B psi)[c] = sum wA[c] wB[c ^ fA] psi[c ^ fA ^ fB]."""
        self._check(other)
        parts = {}
        for flip_a, weights_a in self.parts.items():
            for flip_b, weights_b in other.parts.items():
                flip = flip_a ^ flip_b
                weights = weights_a * weights_b[self._index ^ flip_a]
                parts[flip] = parts[flip] + weights if flip in parts else weights
        return CompiledOperator(self.dimension, parts)

    def adjoint(self) -> "CompiledOperator":
        return CompiledOperator(
            self.dimension,
            {f: np.conj(w[self._index ^ f]) for f, w in self.parts.items()},
        )

    def diagonal(self) -> np.ndarray:
        return self.parts.get(0, np.zeros(self.dimension, dtype=complex))

    def shifted(self, constant: complex) -> "CompiledOperator":
        """self - constant * I."""
        parts = dict(self.parts)
        parts[0] = self.diagonal() - constant
        return CompiledOperator(self.dimension, parts)

    @property
    def is_zero(self) -> bool:
        return not self.parts

    # --- Evaluation ---

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dimension, dtype=complex)
        for flip, weights in self.parts.items():
            if flip == 0:
                out += weights * psi
            else:
                out += weights * psi[self._sources[flip]]
        return out

    def to_dense(self) -> np.ndarray:
        matrix = np.zeros((self.dimension, self.dimension), dtype=complex)
        for flip, weights in self.parts.items():
            matrix[self._index, self._index ^ flip] += weights
        return matrix

    def inf_norm(self) -> float:
        """Maximum absolute row sum; bounds the spectral norm of Hermitian operators."""
        if not self.parts:
            return 0.0
        return float(np.max(sum(np.abs(w) for w in self.parts.values())))
