"""
Tests for routing.py: prefix products, route scores and the order search.
"""
import itertools

import numpy as np
import pytest

from codes import ErrorTag, catalog_get
from pauli import pauli_from_string
from routing import RouteError, optimize_route, prefix_operators, score_route


class TestPrefixes:

    def test_last_prefix_is_generator(self, five_qubit):
        m1 = five_qubit.stabilizers[0]
        prefixes = prefix_operators(m1, (5, 4, 3, 2))
        assert [p.label() for p in prefixes] == ["Z5", "X4Z5", "X3X4Z5", "Z2X3X4Z5"]
        assert prefixes[-1] == m1.unsigned()

    @pytest.mark.parametrize("order", [(5, 4, 3), (5, 4, 3, 1), (5, 4, 3, 2, 2)])
    def test_order_must_permute_support(self, five_qubit, order):
        with pytest.raises(RouteError):
            prefix_operators(five_qubit.stabilizers[0], order)


class TestScores:

    def test_bacon_shor_naive_order(self, bacon_shor):
        report = score_route(bacon_shor, bacon_shor.stabilizers[2], (8, 5, 2, 1, 4, 7))
        assert report.counts == (1, 2, 3)
        assert report.objective == (3, 2)

    def test_bacon_shor_row_order_avoids_uncorrectable(self, bacon_shor):
        report = score_route(bacon_shor, bacon_shor.stabilizers[2], (8, 7, 4, 5, 2, 1))
        assert report.counts == (3, 3, 0)

    def test_five_qubit_naive_order(self, five_qubit):
        report = score_route(five_qubit, five_qubit.stabilizers[0], (5, 4, 3, 2))
        tags = [c.tag for _, c in report.per_prefix]
        assert tags == [
            ErrorTag.CORRECTABLE,
            ErrorTag.UNCORRECTABLE,
            ErrorTag.CORRECTABLE,
            ErrorTag.HARMLESS,
        ]

    def test_render_uses_scattering_display_order(self, bacon_shor):
        report = score_route(bacon_shor, bacon_shor.stabilizers[2], (8, 7, 4, 5, 2, 1))
        lines = report.render(bacon_shor).splitlines()
        assert lines[0].split() == ["Z8", "CORRECTABLE", "(=", "Z8)"]
        assert lines[2].split() == ["Z4Z7Z8", "CORRECTABLE", "(=", "Z4", "*", "gauge[Z7Z8])"]
        assert lines[-1].split() == ["Z1Z2Z5Z4Z7Z8", "HARMLESS", "(gauge)"]

    def test_non_stabilizer_rejected(self, bacon_shor):
        with pytest.raises(RouteError, match="not a stabilizer"):
            score_route(bacon_shor, pauli_from_string("Z1Z2", 9), (1, 2))


class TestSearch:

    def test_exhaustive_bacon_shor(self, bacon_shor):
        report = optimize_route(bacon_shor, bacon_shor.stabilizers[2])
        assert report.order == (1, 2, 4, 5, 7, 8)
        assert report.objective == (0, 3)

    def test_exhaustive_five_qubit_keeps_one_uncorrectable(self, five_qubit):
        """Every order of a weight-4 generator leaks one weight-2 prefix."""
        for m in five_qubit.stabilizers:
            report = optimize_route(five_qubit, m)
            assert report.objective[0] == 1

    def test_exhaustive_is_never_worse_than_naive(self, steane_seven):
        for m, naive in zip(steane_seven.stabilizers, steane_seven.naive_routes):
            best = optimize_route(steane_seven, m)
            assert best.objective <= score_route(steane_seven, m, naive).objective

    def test_greedy_matches_exhaustive_on_bacon_shor(self, bacon_shor):
        greedy = optimize_route(bacon_shor, bacon_shor.stabilizers[2], "greedy")
        assert greedy.objective == (0, 3)

    def test_unknown_strategy(self, five_qubit):
        with pytest.raises(RouteError):
            optimize_route(five_qubit, five_qubit.stabilizers[0], "annealing")


class TestSearchProperties:

    def test_reversed_order_has_same_classes(self, bacon_shor):
        """Prefix j of the reversed order is the generator times prefix n - j of the original."""
        for m in bacon_shor.stabilizers:
            for order in itertools.permutations(m.support):
                if order[0] > order[-1]:
                    continue
                forward = score_route(bacon_shor, m, order)
                backward = score_route(bacon_shor, m, tuple(reversed(order)))
                assert backward.counts == forward.counts

    @pytest.mark.parametrize("name", ["five_qubit", "steane_seven", "bacon_shor_nine"])
    def test_exhaustive_beats_random_orders(self, name):
        code = catalog_get(name)
        rng = np.random.default_rng(17)
        for m in code.stabilizers:
            best = optimize_route(code, m).objective
            for _ in range(100):
                order = tuple(int(q) for q in rng.permutation(m.support))
                assert best <= score_route(code, m, order).objective
