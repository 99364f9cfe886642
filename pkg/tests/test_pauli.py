"""
Tests for pauli.py: parsing, phase-exact products, commutation and group membership.
"""
import numpy as np
import pytest

from codes import catalog_get
from pauli import (
    PauliError,
    PauliString,
    apply_pauli,
    commutes,
    decompose,
    group_rank,
    in_group,
    multiply,
    pauli_from_string,
    product,
    single,
    to_matrix,
)


def P(text, n=5):
    return pauli_from_string(text, n)


class TestParsing:

    def test_parse_mixed_letters(self):
        p = P("Z2X3X4Z5")
        assert p.support == (2, 3, 4, 5)
        assert p.letter(2) == "Z"
        assert p.letter(3) == "X"
        assert p.letter(1) == "I"
        assert p.weight == 4
        assert p.label() == "Z2X3X4Z5"

    def test_parse_accepts_any_qubit_order(self):
        """Tokens may come in any order; the label is ascending."""
        assert P("Z5X3") == P("X3Z5")
        assert P("Z5X3").label() == "X3Z5"

    def test_identity_spellings(self):
        assert P("").is_identity
        assert P("I").is_identity
        assert str(P("I")) == "I"

    def test_y_sets_both_bits(self):
        y = P("Y2")
        assert y.x_bits == y.z_bits == 0b10
        assert y.y_count == 1

    @pytest.mark.parametrize("text", ["X0", "X6", "X1X1", "x1", "X1 Z2", "Q1", "X"])
    def test_malformed_text_raises(self, text):
        with pytest.raises(PauliError):
            P(text)

    def test_label_with_display_order(self):
        p = pauli_from_string("Z1Z2Z4Z5Z8", 9)
        assert p.label((7, 4, 1, 2, 5, 8)) == "Z4Z1Z2Z5Z8"

    def test_masks_must_fit(self):
        with pytest.raises(PauliError):
            PauliString(2, x_bits=0b100)


class TestMultiply:

    def test_single_qubit_phases(self):
        """XZ = -iY and ZX = iY with Y = iXZ."""
        xz = multiply(single("X", 1, 1), single("Z", 1, 1))
        zx = multiply(single("Z", 1, 1), single("X", 1, 1))
        assert xz.letter(1) == "Y" and xz.phase == 3
        assert zx.letter(1) == "Y" and zx.phase == 1
        assert str(xz) == "-i*Y1"

    def test_square_is_identity(self):
        for text in ("X1", "Y3", "Z2X3X4Z5", "X1Y2Z3"):
            square = P(text) * P(text)
            assert square.is_identity and square.phase == 0

    @pytest.mark.parametrize("a, b, n", [
        ("X1Y2", "Z1Z2", 2),
        ("Y1Y2Y3", "X2Z3", 3),
        ("Z2X3X4Z5", "Z1Z3X4X5", 5),
        ("Y1", "Y1Z2", 2),
    ])
    def test_product_matches_matrices(self, a, b, n):
        p, q = P(a, n), P(b, n)
        assert np.allclose(to_matrix(p * q), to_matrix(p) @ to_matrix(q))

    def test_size_mismatch_raises(self):
        with pytest.raises(PauliError):
            multiply(P("X1", 2), P("X1", 3))

    def test_associative(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            n = int(rng.integers(1, 10))
            a, b, c = (
                PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))
                for _ in range(3)
            )
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


class TestCommutation:

    def test_five_qubit_stabilizers_commute(self, five_qubit):
        for a in five_qubit.stabilizers:
            for b in five_qubit.stabilizers:
                assert commutes(a, b)

    def test_logicals_anticommute(self, five_qubit):
        assert not commutes(five_qubit.logical_x, five_qubit.logical_z)

    def test_even_overlap_commutes(self):
        assert commutes(P("X1X2"), P("Z1Z2"))
        assert not commutes(P("X1X2"), P("Z1"))

    @pytest.mark.parametrize("name", ["five_qubit", "steane_seven", "bacon_shor_nine", "bitflip_three"])
    def test_matches_dense_commutator(self, name):
        code = catalog_get(name)
        ops = list(code.stabilizers) + list(code.gauge_generators) + [code.logical_x, code.logical_z]
        rng = np.random.default_rng(4)
        v = rng.normal(size=2 ** code.n_qubits) + 1j * rng.normal(size=2 ** code.n_qubits)
        dense = [to_matrix(p) for p in ops]
        for i, a in enumerate(ops):
            for j, b in enumerate(ops):
                ab, ba = dense[i] @ (dense[j] @ v), dense[j] @ (dense[i] @ v)
                assert np.allclose(ab, ba if commutes(a, b) else -ba)


class TestGroupMembership:

    def test_decompose_returns_witness(self, five_qubit):
        gens = five_qubit.stabilizers
        target = (gens[0] * gens[2]).unsigned()
        assert decompose(target, gens) == (0, 2)
        assert in_group(target, gens)

    def test_non_member(self, five_qubit):
        assert decompose(P("X1"), five_qubit.stabilizers) is None
        assert not in_group(five_qubit.logical_z, five_qubit.stabilizers)

    def test_phase_ignored(self, five_qubit):
        m = five_qubit.stabilizers[1]
        assert in_group(PauliString(5, m.x_bits, m.z_bits, 2), five_qubit.stabilizers)

    def test_rank_drops_for_dependent_generators(self, steane_seven):
        gens = list(steane_seven.stabilizers)
        assert group_rank(gens) == 6
        assert group_rank(gens + [(gens[0] * gens[1]).unsigned()]) == 6

    @pytest.mark.parametrize("name, extra", [
        ("five_qubit", False),
        ("five_qubit", True),
        ("steane_seven", False),
        ("bitflip_three", False),
    ])
    def test_matches_enumerated_group(self, name, extra):
        code = catalog_get(name)
        gens = list(code.stabilizers) + ([code.logical_x] if extra else [])
        n = code.n_qubits
        members = {
            product([g for i, g in enumerate(gens) if (mask >> i) & 1], n).symplectic
            for mask in range(1 << len(gens))
        }
        for x in range(1 << n):
            for z in range(1 << n):
                p = PauliString(n, x, z)
                assert in_group(p, gens) == (p.symplectic in members)


class TestApply:

    @pytest.mark.parametrize("text", ["X1", "Y2", "Z3", "X1Y2Z3", "Y1Y3"])
    def test_matches_dense_matrix(self, text):
        p = P(text, 3)
        rng = np.random.default_rng(3)
        vector = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert np.allclose(apply_pauli(p, vector), to_matrix(p) @ vector)

    def test_acts_on_matrix_columns(self):
        p = P("Y1Z2", 2)
        block = np.arange(8, dtype=complex).reshape(4, 2)
        assert np.allclose(apply_pauli(p, block), to_matrix(p) @ block)

    def test_phase_is_applied(self):
        p = PauliString(1, 1, 0, 1)  # i*X
        assert np.allclose(apply_pauli(p, np.array([1, 0])), [0, 1j])
