"""CSV and plot-script writers.

CSV files are UTF-8 with LF endings, a header row, and numbers written in
scientific notation with 17 significant digits so that re-running a sweep
reproduces the file byte for byte.  Plot scripts are gnuplot command files
that reference their CSV by relative path only.
"""
from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

from .sweeps import Table


def format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return format(float(value), ".16e")
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".16e")


def table_to_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    lines.extend(",".join(format_cell(c) for c in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def _write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_csv(table: Table, path) -> Path:
    return _write_text(Path(path), table_to_csv(table))


def write_summary(table: Table, path) -> Path:
    lines = [f"{k} = {format_cell(v)}" for k, v in sorted(table.summary.items())]
    return _write_text(Path(path), "\n".join(lines) + "\n")


def write_traces(table: Table, directory) -> list[Path]:
    directory = Path(directory)
    return [write_csv(tr, directory / f"{name}.csv") for name, tr in sorted(table.traces.items())]


# (title, x column, [(y column, axis, style)], xlabel, ylabel, y2label)
_PLOTS = {
    "width-sweep": (
        "Group delay and transmission versus well width",
        "k_prime_a", [("tau_rel", "x1y1", "lines"), ("T", "x1y2", "lines dashtype 2")],
        "k'a", "tau / tau0", "T",
    ),
    "phase-sweep": (
        "Transmission phase shift versus well width",
        "k_prime_a", [("phi", "x1y1", "lines")],
        "k'a", "phi (rad)", None,
    ),
    "energy-sweep": (
        "Group delay versus incident energy",
        "alpha", [("tau_rel", "x1y1", "lines"), ("asymptotic_tau", "x1y1", "lines dashtype 2")],
        "alpha = E / mu c^2", "tau / tau0", None,
    ),
    "packet": (
        "Stationary-phase and wave-packet group delays",
        "k_prime_a", [("tau_theory", "x1y1", "lines"), ("tau_numeric", "x1y1", "linespoints dashtype 2")],
        "k'a", "tau / tau0", None,
    ),
    "compare-nonrel": (
        "Relativistic and non-relativistic group delays",
        "k_prime_a", [("tau_rel", "x1y1", "lines"), ("tau_nonrel", "x1y1", "lines dashtype 2")],
        "k'a (own k')", "tau / tau0", None,
    ),
    "threshold-table": (
        "Threshold energy for negative group delay",
        "beta", [("E_t_closed_form", "x1y1", "lines"), ("E_t_bisection", "x1y1", "points")],
        "beta = V0 / mu c^2", "E_t / mu c^2", None,
    ),
}


def plot_script(table: Table, csv_name: str) -> str:
    title, xcol, series, xlabel, ylabel, y2label = _PLOTS[table.kind]
    stem = os.path.splitext(csv_name)[0]
    out = [
        "# gnuplot command file; run from the directory holding the CSV",
        "set datafile separator ','",
        "set terminal pngcairo size 900,600",
        f"set output '{stem}.png'",
        f"set title \"{title}\"",
        f"set xlabel \"{xlabel}\"",
        f"set ylabel \"{ylabel}\"",
    ]
    if y2label:
        out += [f"set y2label \"{y2label}\"", "set y2tics", "set ytics nomirror"]
    parts = []
    for i, (col, axes, style) in enumerate(series):
        src = f"'{csv_name}'" if i == 0 else "''"
        parts.append(
            f"{src} using (column(\"{xcol}\")):(column(\"{col}\")) axes {axes} with {style} title \"{col}\""
        )
    out.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(out) + "\n"


def write_plot_script(table: Table, csv_path) -> Path:
    csv_path = Path(csv_path)
    script = csv_path.with_suffix(".gp")
    return _write_text(script, plot_script(table, csv_path.name))
