"""
Tests for metrics.py: fidelities, the windowed maximum and ensemble statistics.
"""
import numpy as np
import pytest

from codes import catalog_get
from dynamics import encode_initial_state
from kernels import StateVector
from metrics import (
    MetricSpec,
    TrajectoryRecord,
    ensemble_average,
    f_star,
    fidelity_strict,
    fidelity_subsystem,
    resolve_metric_kind,
    window_samples,
)
from pauli import apply_pauli


def _with_register(state: StateVector, register_op) -> StateVector:
    matrix = register_op(state.register_matrix())
    return StateVector(matrix.reshape(-1), state.n_register, state.n_relays)


class TestFidelities:

    def test_initial_state_has_unit_fidelity(self, five_qubit):
        psi0 = encode_initial_state(five_qubit, "zero")
        assert fidelity_strict(psi0, psi0) == pytest.approx(1.0)
        assert fidelity_subsystem(psi0, five_qubit, "zero") == pytest.approx(1.0)
        assert fidelity_subsystem(psi0, five_qubit, "one") == pytest.approx(0.0, abs=1e-12)

    def test_logical_flip_is_orthogonal(self, steane_seven):
        psi0 = encode_initial_state(steane_seven, "zero")
        flipped = _with_register(psi0, lambda m: apply_pauli(steane_seven.logical_x, m))
        assert fidelity_strict(flipped, psi0) == pytest.approx(0.0, abs=1e-12)

    def test_correctable_error_leaves_codespace(self, five_qubit):
        psi0 = encode_initial_state(five_qubit, "plus")
        damaged = _with_register(psi0, lambda m: apply_pauli(five_qubit.parse("Y3"), m))
        assert fidelity_subsystem(damaged, five_qubit, "plus") == pytest.approx(0.0, abs=1e-12)

    def test_gauge_operator_is_invisible_to_subsystem_fidelity(self, bacon_shor):
        psi0 = encode_initial_state(bacon_shor, "zero")
        moved = _with_register(psi0, lambda m: apply_pauli(bacon_shor.parse("X1X4"), m))
        assert fidelity_subsystem(moved, bacon_shor, "zero") == pytest.approx(1.0)

    def test_relays_are_traced_out(self, bitflip_three):
        """Flipping a relay does not change either fidelity."""
        psi0 = encode_initial_state(bitflip_three, "zero")
        relay_flipped = StateVector(
            psi0.register_matrix()[:, [1, 0, 3, 2]].reshape(-1), psi0.n_register, psi0.n_relays,
        )
        assert fidelity_strict(relay_flipped, psi0) == pytest.approx(1.0)
        assert fidelity_subsystem(relay_flipped, bitflip_three, "zero") == pytest.approx(1.0)

    def test_dimension_mismatch(self, bitflip_three, five_qubit):
        with pytest.raises(ValueError):
            fidelity_strict(encode_initial_state(bitflip_three), encode_initial_state(five_qubit))

    def test_metric_kind_resolution(self, bacon_shor, five_qubit):
        assert resolve_metric_kind("auto", bacon_shor) == "subsystem"
        assert resolve_metric_kind("auto", five_qubit) == "strict"
        assert resolve_metric_kind("strict", bacon_shor) == "strict"
        with pytest.raises(ValueError):
            resolve_metric_kind("trace", five_qubit)


class TestWindowedMaximum:

    def test_forward_window(self):
        trace = np.array([0.5, 1.0, 0.2, 0.3, 0.9])
        assert np.allclose(f_star(trace, 0.1, 0.1), [1.0, 1.0, 0.3, 0.9])
        assert np.allclose(f_star(trace, 0.2, 0.1), [1.0, 1.0, 0.9])

    def test_zero_width_is_identity(self):
        trace = np.array([0.9, 0.4, 0.7])
        assert np.allclose(f_star(trace, 0.0, 0.01), trace)

    def test_full_horizon_window(self):
        trace = np.array([0.1, 0.6, 0.3])
        assert np.allclose(f_star(trace, 0.02, 0.01), [0.6])

    def test_rows_are_independent_traces(self):
        traces = np.array([[0.1, 0.5, 0.2], [0.9, 0.3, 0.4]])
        assert np.allclose(f_star(traces, 0.01, 0.01), [[0.5, 0.5], [0.9, 0.4]])

    def test_window_beyond_horizon(self):
        with pytest.raises(ValueError, match="horizon"):
            f_star(np.ones(5), 0.05, 0.01)

    def test_window_samples_rounding(self):
        assert window_samples(0.3, 0.1) == 3
        assert window_samples(0.05, 0.01) == 5
        with pytest.raises(ValueError):
            window_samples(-0.1, 0.01)


def _record(values, index):
    grid = np.round(np.arange(len(values)) * 0.1, 12)
    return TrajectoryRecord(grid, {"strict": np.array(values, dtype=float)}, (), 5, index)


class TestEnsembles:

    def test_mean_and_standard_error(self):
        records = [_record([1.0, 0.8, 0.6], 0), _record([1.0, 0.6, 0.2], 1)]
        result = ensemble_average(records, "strict")
        assert np.allclose(result.mean, [1.0, 0.7, 0.4])
        assert np.allclose(result.std_error, [0.0, np.std([0.8, 0.6], ddof=1) / np.sqrt(2), 0.2])
        assert result.n_trajectories == 2 and result.seed == 5

    def test_fstar_taken_per_trajectory(self):
        """Mean of maxima, not maximum of the mean."""
        records = [_record([1.0, 0.0, 0.0], 0), _record([0.0, 1.0, 0.0], 1)]
        result = ensemble_average(records, "strict", tau=0.1)
        assert np.allclose(result.mean, [1.0, 0.5])
        assert result.label == "strict_Fstar_0.1"
        assert len(result.time_grid) == 2

    def test_single_record_has_zero_error(self):
        result = ensemble_average([_record([0.5, 0.25], 0)], "strict")
        assert np.allclose(result.std_error, 0.0)

    def test_grid_mismatch(self):
        other = TrajectoryRecord(np.array([0.0, 0.2, 0.4]), {"strict": np.ones(3)}, index=1)
        with pytest.raises(ValueError, match="time grid"):
            ensemble_average([_record([1.0, 1.0, 1.0], 0), other], "strict")

    def test_empty(self):
        with pytest.raises(ValueError):
            ensemble_average([], "strict")


class TestMetricSpec:

    def test_validation(self):
        with pytest.raises(ValueError):
            MetricSpec(kind="trace")
        with pytest.raises(ValueError):
            MetricSpec(tau_list=(-0.1,))

    def test_horizon(self):
        spec = MetricSpec(tau_list=(0.1, 0.5))
        spec.check_horizon(1.0)
        with pytest.raises(ValueError):
            spec.check_horizon(0.3)

    def test_resolve_auto(self, bacon_shor, five_qubit):
        assert MetricSpec.resolve("auto", bacon_shor).kind == "subsystem"
        spec = MetricSpec.resolve("auto", five_qubit, "plus", [0.1, 0.2])
        assert spec == MetricSpec("strict", "plus", (0.1, 0.2))


class TestWindowProperties:

    def test_bounds_and_monotonicity_in_window(self):
        rng = np.random.default_rng(8)
        traces = rng.uniform(0.0, 1.0, size=(20, 101))
        previous = traces
        for tau in (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4):
            windowed = f_star(traces, tau, 0.01)
            assert np.all(windowed >= traces[:, : windowed.shape[1]])
            assert np.all(windowed >= previous[:, : windowed.shape[1]])
            previous = windowed


def _random_near(psi0: StateVector, rng: np.random.Generator, weight: float) -> StateVector:
    noise = rng.normal(size=psi0.dimension) + 1j * rng.normal(size=psi0.dimension)
    mixed = psi0.amplitudes + weight * noise / np.linalg.norm(noise)
    return StateVector(mixed / np.linalg.norm(mixed), psi0.n_register, psi0.n_relays)


class TestFidelityProperties:

    @pytest.mark.parametrize("name", ["five_qubit", "bacon_shor_nine"])
    def test_subsystem_bounds_strict(self, name):
        code = catalog_get(name)
        psi0 = encode_initial_state(code, "zero")
        rng = np.random.default_rng(12)
        for weight in (0.1, 0.5, 1.0, 3.0):
            psi = _random_near(psi0, rng, weight)
            assert fidelity_subsystem(psi, code, "zero") >= fidelity_strict(psi, psi0) - 1e-12

    @pytest.mark.parametrize("name", ["five_qubit", "bacon_shor_nine"])
    def test_relay_unitaries_do_not_matter(self, name):
        code = catalog_get(name)
        psi0 = encode_initial_state(code, "zero")
        rng = np.random.default_rng(5)
        psi = _random_near(psi0, rng, 0.7)
        size = 2 ** psi.n_relays
        unitary, _ = np.linalg.qr(rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size)))
        rotated = StateVector((psi.register_matrix() @ unitary.T).reshape(-1), psi.n_register, psi.n_relays)
        assert fidelity_strict(rotated, psi0) == pytest.approx(fidelity_strict(psi, psi0), abs=1e-12)
        assert fidelity_subsystem(rotated, code, "zero") == pytest.approx(
            fidelity_subsystem(psi, code, "zero"), abs=1e-12
        )
