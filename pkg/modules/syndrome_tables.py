# modules/syndrome_tables.py
import pandas as pd

from codes import catalog_get, render_syndrome_table, syndrome_table


def syndrome_frame(code_name: str) -> pd.DataFrame:
    """Rows X1..XQ, Z1..ZQ, Y1..YQ; one "+"/"-" column per stabilizer."""
    code = catalog_get(code_name)
    columns = [f"M{n}" for n in range(1, code.n_stabilizers + 1)]
    rows = {label: s.render().split() for label, s in syndrome_table(code)}
    return pd.DataFrame.from_dict(rows, orient="index", columns=columns)


def show_page(code_name: str, header: bool = False) -> str:
    """Plain "X1 + + + - - -" lines, or a labelled pandas table with `header`."""
    if header:
        return syndrome_frame(code_name).to_string()
    return render_syndrome_table(catalog_get(code_name))
