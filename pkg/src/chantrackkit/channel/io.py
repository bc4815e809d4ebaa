# Standard Libraries
from pathlib import Path

# Dependencies
from astropy.table import Table
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit._errors import DimensionError

FLOAT_FORMAT = ".17g"


def complex_to_table(values: npt.ArrayLike) -> Table:
    """
    One row per matrix row; column k of the matrix becomes the pair
    `c{k}_re`, `c{k}_im`.
    """
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim != 2:
        raise DimensionError(f"Expected a vector or matrix ({values.ndim} dims)")
    table = Table()
    for k in range(values.shape[1]):
        table[f"c{k}_re"] = values[:, k].real
        table[f"c{k}_im"] = values[:, k].imag
    for name in table.colnames:
        table[name].info.format = FLOAT_FORMAT
    return table


def table_to_complex(table: Table) -> npt.NDArray[np.complex128]:
    num_cols = len(table.colnames) // 2
    out = np.empty((len(table), num_cols), dtype=np.complex128)
    for k in range(num_cols):
        out[:, k] = np.asarray(table[f"c{k}_re"]) + 1j * np.asarray(
            table[f"c{k}_im"]
        )
    return out


def save_complex_table(path: str | Path, values: npt.ArrayLike) -> None:
    """
    Writes a complex vector or matrix as CSV with interleaved real and
    imaginary columns at full double precision.
    """
    complex_to_table(values).write(
        Path(path), format="ascii.csv", overwrite=True
    )


def load_complex_table(path: str | Path) -> npt.NDArray[np.complex128]:
    table = Table.read(Path(path), format="ascii.csv")
    return table_to_complex(table)
