# Standard Libraries
from datetime import datetime, timezone
import logging
from pathlib import Path

# Dependencies
from astropy.table import Table
import numpy as np

# Relative Imports
from .metrics import METRIC_COLUMNS, MetricRow

logger = logging.getLogger(__name__)

_DTYPES = (str, str, str, np.float64, str, str, np.int64, np.float64, np.float64)
_FLOAT_FORMAT = ".17g"
TIMESTAMP_PREFIX = "generated "


def rows_to_table(rows: list[MetricRow]) -> Table:
    if rows:
        table = Table(rows=[tuple(r) for r in rows], names=METRIC_COLUMNS)
    else:
        table = Table(names=METRIC_COLUMNS, dtype=_DTYPES)
    for name in ("x", "value", "value_db"):
        table[name].info.format = _FLOAT_FORMAT
    return table


def plot_table(rows: list[MetricRow], aggregate: str = "median") -> Table:
    """
    Pivots rows into one line per x value with a column per
    (series, metric) pair. Missing cells are NaN.
    """
    rows = [r for r in rows if r.aggregate == aggregate]
    xs = sorted({r.x for r in rows})
    keys = sorted({(r.series, r.metric) for r in rows})
    x_name = rows[0].x_name if rows else "x"
    table = Table()
    table[x_name] = np.asarray(xs, dtype=np.float64)
    index = {x: i for i, x in enumerate(xs)}
    for series, metric in keys:
        column = np.full(len(xs), np.nan)
        for r in rows:
            if r.series == series and r.metric == metric:
                column[index[r.x]] = r.value_db
        table[f"{series}:{metric}_db".replace(" ", "_")] = column
    for name in table.colnames:
        table[name].info.format = _FLOAT_FORMAT
    return table


def _write(table: Table, path: Path, fmt: str, **kwargs) -> None:
    try:
        table.write(path, format=fmt, overwrite=True, **kwargs)
    except OSError as err:
        raise OSError(f"Cannot write {path}: {err}") from err


def emit_outputs(
    rows: list[MetricRow], out_dir: str | Path, scenario: str
) -> tuple[Path, Path]:
    """
    Writes `{scenario}_metrics.csv` and `{scenario}_plot.dat` into `out_dir`.

    The CSV starts with one commented timestamp line followed by the fixed
    header of METRIC_COLUMNS; floats carry 17 significant digits so that
    values read back bit-exactly. The plot-data file holds median values in
    dB, one row per x.

    Returns
    -------
    paths: tuple of Path
        The metrics CSV and the plot-data file.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise OSError(f"Cannot create output directory {out_dir}: {err}") from err

    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    table = rows_to_table(rows)
    table.meta["comments"] = [TIMESTAMP_PREFIX + stamp]
    csv_path = out_dir / f"{scenario}_metrics.csv"
    # the csv writer drops meta comments unless a prefix is given
    _write(table, csv_path, "ascii.csv", comment="# ")

    plot_path = out_dir / f"{scenario}_plot.dat"
    _write(plot_table(rows), plot_path, "ascii.commented_header")
    logger.info("Wrote %d rows to %s", len(rows), csv_path)
    return csv_path, plot_path


def read_metrics(path: str | Path) -> list[MetricRow]:
    path = Path(path)
    try:
        table = Table.read(path, format="ascii.csv", comment="#")
    except OSError as err:
        raise OSError(f"Cannot read {path}: {err}") from err
    if len(table) == 0:
        return []
    return [
        MetricRow(
            str(r["scenario"]),
            str(r["series"]),
            str(r["x_name"]),
            float(r["x"]),
            str(r["metric"]),
            str(r["aggregate"]),
            int(r["n_trials"]),
            float(r["value"]),
            float(r["value_db"]),
        )
        for r in table
    ]
