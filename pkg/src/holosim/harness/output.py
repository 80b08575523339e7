"""CSV/JSON writers and SVG line charts."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def rounded(value):
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(value, dict):
        return {k: rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [rounded(v) for v in value]
    if isinstance(value, np.ndarray):
        return rounded(value.tolist())
    if isinstance(value, (float, np.floating)):
        return float(format(float(value), ".12g"))
    if isinstance(value, np.integer):
        return int(value)
    return value


def csv_text(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(path, rows, columns) -> None:
    Path(path).write_text(csv_text(rows, columns), newline="")


def write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(rounded(doc), indent=2, sort_keys=False) + "\n")


class PlotError(ValueError):
    pass


def read_csv(path) -> tuple[list[str], list[dict]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            rows = list(reader)
    except (OSError, csv.Error, UnicodeDecodeError) as exc:
        raise PlotError(f"cannot read {path}: {exc}") from None
    if not header or not rows:
        raise PlotError(f"{path} has no data rows")
    return header, rows


def _series(rows, column):
    try:
        return [float(r[column]) for r in rows]
    except (TypeError, ValueError, KeyError):
        raise PlotError(f"non-numeric or missing values in column {column!r}") from None


def plot_csv(path, kind: str, out, column: str | None = None) -> None:
    """Render a trajectory or sweep CSV as a standalone SVG line chart."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    header, rows = read_csv(path)
    matplotlib.rcParams["svg.hashsalt"] = "holosim"
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    try:
        if kind == "traj":
            needed = {"protocol", "t_us", "p_e", "p_g", "p_a", "fidelity_to_target"}
            if not needed <= set(header):
                raise PlotError(f"trajectory CSV needs columns {sorted(needed)}")
            protocols = list(dict.fromkeys(r["protocol"] for r in rows))
            for proto in protocols:
                sub = [r for r in rows if r["protocol"] == proto]
                t = _series(sub, "t_us")
                for col in ("p_e", "p_g", "p_a", "fidelity_to_target"):
                    label = col if len(protocols) == 1 else f"{proto} {col}"
                    ax.plot(t, _series(sub, col), label=label)
            ax.set_xlabel("time (us)")
            ax.set_ylabel("population / fidelity")
        elif kind == "sweep":
            column = column or "state_fidelity"
            needed = {"param_name", "param_value", "protocol", column}
            if not needed <= set(header):
                raise PlotError(f"sweep CSV needs columns {sorted(needed)}")
            for proto in dict.fromkeys(r["protocol"] for r in rows):
                sub = [r for r in rows if r["protocol"] == proto]
                ax.plot(_series(sub, "param_value"), _series(sub, column),
                        marker="o", ms=3, label=proto)
            ax.set_xlabel(rows[0]["param_name"])
            ax.set_ylabel(column)
        else:
            raise PlotError(f"unknown plot kind {kind!r}")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(out, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
