"""
Tests for codes.py: catalog consistency, syndrome tables, separability, operator
classification and logical projectors.
"""
import itertools

import numpy as np
import pytest

from codes import (
    CodeError,
    ErrorTag,
    PauliProjector,
    SyndromeVector,
    catalog_get,
    catalog_names,
    check_code,
    classify_operator,
    describe_class,
    is_separable,
    logical_projector,
    render_syndrome_table,
    syndrome,
)
from conftest import read_fixture
from pauli import pauli_from_string


class TestCatalog:

    @pytest.mark.parametrize("name", ["five_qubit", "steane_seven", "bacon_shor_nine", "bitflip_three"])
    def test_invariants_hold(self, name):
        assert check_code(catalog_get(name)) == []

    def test_unknown_name(self):
        with pytest.raises(CodeError, match="Known codes"):
            catalog_get("toric")

    def test_names_and_sizes(self):
        assert catalog_names() == ["five_qubit", "steane_seven", "bacon_shor_nine", "bitflip_three"]
        sizes = {name: (catalog_get(name).n_qubits, catalog_get(name).n_stabilizers) for name in catalog_names()}
        assert sizes == {
            "five_qubit": (5, 4),
            "steane_seven": (7, 6),
            "bacon_shor_nine": (9, 4),
            "bitflip_three": (3, 2),
        }

    def test_naive_routes_are_support_permutations(self):
        for name in catalog_names():
            code = catalog_get(name)
            for m, order in zip(code.stabilizers, code.naive_routes):
                assert sorted(order) == list(m.support)

    def test_stabilizer_index(self, five_qubit):
        assert five_qubit.stabilizer_index(five_qubit.parse("X1Z2Z4X5")) == 3
        assert five_qubit.stabilizer_index(five_qubit.parse("X1")) is None


class TestSyndromes:

    def test_steane_table_matches_fixture(self, steane_seven):
        assert render_syndrome_table(steane_seven) == read_fixture("steane_seven_syndromes.txt")

    def test_five_qubit_table_matches_fixture(self, five_qubit):
        assert render_syndrome_table(five_qubit) == read_fixture("five_qubit_syndromes.txt")

    def test_y_syndrome_is_product_of_x_and_z(self, steane_seven):
        for q in range(1, 8):
            x = syndrome(steane_seven, steane_seven.parse(f"X{q}")).values
            z = syndrome(steane_seven, steane_seven.parse(f"Z{q}")).values
            y = syndrome(steane_seven, steane_seven.parse(f"Y{q}")).values
            assert y == tuple(a * b for a, b in zip(x, z))

    def test_single_errors_have_distinct_syndromes(self, five_qubit):
        seen = {syndrome(five_qubit, e) for e in five_qubit.correctable_errors}
        assert len(seen) == 15

    def test_register_size_checked(self, five_qubit, steane_seven):
        with pytest.raises(CodeError):
            syndrome(five_qubit, steane_seven.parse("X7"))

    def test_syndrome_vector_rejects_other_values(self):
        with pytest.raises(CodeError):
            SyndromeVector((1, 0, -1))


class TestSeparability:

    def test_five_qubit_is_not_separable(self, five_qubit):
        assert is_separable(five_qubit) is None

    def test_steane_partition(self, steane_seven):
        assert is_separable(steane_seven) == ((3, 4, 5), (0, 1, 2))

    def test_bacon_shor_partition(self, bacon_shor):
        assert is_separable(bacon_shor) == ((2, 3), (0, 1))


class TestClassification:

    def test_stabilizer_is_harmless(self, five_qubit):
        result = classify_operator(five_qubit, five_qubit.stabilizers[0])
        assert result.tag is ErrorTag.HARMLESS
        assert describe_class(five_qubit, result) == "(stabilizer)"

    def test_five_qubit_prefix_is_correctable(self, five_qubit):
        """X3X4Z5 = Z2 * M1 up to phase."""
        result = classify_operator(five_qubit, five_qubit.parse("X3X4Z5"))
        assert result.tag is ErrorTag.CORRECTABLE
        error, remainder = result.factorization
        assert error.label() == "Z2"
        assert remainder.label() == "Z2X3X4Z5"

    def test_weight_two_prefix_is_uncorrectable(self, five_qubit):
        result = classify_operator(five_qubit, five_qubit.parse("X4Z5"))
        assert result.tag is ErrorTag.UNCORRECTABLE
        assert result.factorization is None
        assert describe_class(five_qubit, result) == ""

    def test_gauge_operator_is_harmless(self, bacon_shor):
        assert classify_operator(bacon_shor, bacon_shor.parse("Z7Z8")).tag is ErrorTag.HARMLESS
        assert classify_operator(bacon_shor, bacon_shor.parse("X3X6")).tag is ErrorTag.HARMLESS

    def test_bacon_shor_witness(self, bacon_shor):
        result = classify_operator(bacon_shor, bacon_shor.parse("Z4Z7Z8"))
        assert result.tag is ErrorTag.CORRECTABLE
        assert describe_class(bacon_shor, result) == "(= Z4 * gauge[Z7Z8])"

    def test_logical_is_uncorrectable(self, bacon_shor):
        assert classify_operator(bacon_shor, bacon_shor.logical_z).tag is ErrorTag.UNCORRECTABLE

    def test_single_error_witness_has_identity_remainder(self, steane_seven):
        result = classify_operator(steane_seven, steane_seven.parse("X4"))
        assert describe_class(steane_seven, result) == "(= X4)"

    def test_designed_error_is_its_own_witness(self, bacon_shor):
        """Z7 also reaches Z8 through gauge[Z7Z8]; the exact match wins."""
        assert describe_class(bacon_shor, classify_operator(bacon_shor, bacon_shor.parse("Z8"))) == "(= Z8)"
        assert describe_class(bacon_shor, classify_operator(bacon_shor, bacon_shor.parse("Z4Z7Z8"))) == "(= Z4 * gauge[Z7Z8])"

    def test_matches_brute_force_on_bacon_shor(self, bacon_shor):
        harmless = {0}
        for g in bacon_shor.harmless_generators:
            harmless |= {v ^ g.symplectic for v in harmless}
        assert len(harmless) == 4096
        errors = [e.symplectic for e in bacon_shor.correctable_errors]

        n = bacon_shor.n_qubits
        for weight in range(1, 5):
            for qubits in itertools.combinations(range(n), weight):
                for letters in itertools.product("XYZ", repeat=weight):
                    p = pauli_from_string("".join(f"{a}{q + 1}" for a, q in zip(letters, qubits)), n)
                    if p.symplectic in harmless:
                        expected = ErrorTag.HARMLESS
                    elif any(e ^ p.symplectic in harmless for e in errors):
                        expected = ErrorTag.CORRECTABLE
                    else:
                        expected = ErrorTag.UNCORRECTABLE
                    assert classify_operator(bacon_shor, p).tag is expected, p.label()


class TestProjectors:

    def test_stabilizer_code_projector_has_rank_one(self, five_qubit):
        projector = logical_projector(five_qubit, "zero")
        assert projector.rank == 1
        matrix = projector.to_matrix()
        assert np.allclose(matrix @ matrix, matrix)
        assert np.isclose(np.trace(matrix).real, 1.0)

    def test_subsystem_projector_spans_gauge(self, bacon_shor):
        """Identity on the four gauge qubits: trace 2^4."""
        projector = logical_projector(bacon_shor, "plus")
        assert projector.rank == 16
        vector = np.zeros(2 ** 9, dtype=complex)
        vector[0] = 1.0
        image = projector.apply(vector)
        assert np.allclose(projector.apply(image), image)

    def test_orthogonal_logical_states(self, steane_seven):
        zero = logical_projector(steane_seven, "zero").to_matrix()
        one = logical_projector(steane_seven, "one").to_matrix()
        assert np.allclose(zero @ one, 0)

    def test_unknown_state(self, five_qubit):
        with pytest.raises(CodeError):
            logical_projector(five_qubit, "magic")

    def test_empty_projector_is_identity(self):
        vector = np.array([0.6, 0.8j])
        assert np.allclose(PauliProjector(1).apply(vector), vector)
