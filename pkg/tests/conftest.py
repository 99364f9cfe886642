from functools import reduce
from pathlib import Path

import numpy as np
import pytest

from builder import assemble_model
from codes import catalog_get
from pauli import to_matrix

FIXTURES = Path(__file__).parent / "fixtures"
CONFIGS = Path(__file__).parent.parent / "configs"

_RELAY_MATRICES = {
    "sigma_plus": np.array([[0, 0], [1, 0]], dtype=complex),
    "sigma_minus": np.array([[0, 1], [0, 0]], dtype=complex),
    "proj_g": np.array([[1, 0], [0, 0]], dtype=complex),
    "proj_h": np.array([[0, 0], [0, 1]], dtype=complex),
}


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text().strip()


def dense_operator(operator, n_register: int, n_relays: int) -> np.ndarray:
    """Reference kron-product matrix of a symbolic ModelOperator."""
    dim = 2 ** (n_register + n_relays)
    total = np.zeros((dim, dim), dtype=complex)
    for term in operator.terms:
        if term.register_part:
            register = sum(sign * to_matrix(p) for sign, p in term.register_part)
        else:
            register = np.eye(2 ** n_register, dtype=complex)
        factors = [np.eye(2, dtype=complex)] * n_relays
        for spec in term.relay_parts:
            factors[spec.relay_index - 1] = _RELAY_MATRICES[spec.kind]
        relays = reduce(np.kron, factors, np.eye(1, dtype=complex))
        total += operator.scale * complex(term.coefficient) * np.kron(register, relays)
    return total


@pytest.fixture
def five_qubit():
    return catalog_get("five_qubit")


@pytest.fixture
def steane_seven():
    return catalog_get("steane_seven")


@pytest.fixture
def bacon_shor():
    return catalog_get("bacon_shor_nine")


@pytest.fixture
def bitflip_three():
    return catalog_get("bitflip_three")


@pytest.fixture
def bitflip_model(bitflip_three):
    return assemble_model(bitflip_three, Omega=5.0, alpha=2.0, theta=0.0, Gamma=1.0)


@pytest.fixture
def env_file(tmp_path):
    """Writes KEY=value text to a config file and returns its path."""

    def write(text: str, name: str = "experiment.env") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
