# modules/catalog_listing.py
import pandas as pd

from codes import catalog_get, catalog_names, is_separable


def catalog_frame() -> pd.DataFrame:
    """One row per catalog code with its register, relay and gauge sizes."""
    rows = []
    for name in catalog_names():
        code = catalog_get(name)
        rows.append({
            "code": name,
            "Q": code.n_qubits,
            "N": code.n_stabilizers,
            "gauge_generators": len(code.gauge_generators),
            "separable": is_separable(code) is not None,
            "correctable_errors": len(code.correctable_errors),
            "dimension": 2 ** (code.n_qubits + code.n_stabilizers),
        })
    return pd.DataFrame(rows)


def show_page() -> str:
    return catalog_frame().to_string(index=False)
