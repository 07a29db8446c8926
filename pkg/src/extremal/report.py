"""Artifact writers: delimited text, JSON, and optional matplotlib figures.

Every run artifact starts with its resolved configuration so the result can
be reproduced from the file alone.  Exact values serialize as "num/den";
floats render through repr so round-tripping loses nothing.  Output is
deterministic except for the single generated-timestamp line.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
from matplotlib import pyplot as plt  # noqa: E402  backend must be set first

from .exact import fraction_str


def _cell(value):
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return str(value)
    return value


def jsonable(value):
    """Recursively convert Fractions (and tuples) into JSON-safe values."""
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def render_csv(rows: Sequence[dict], meta: dict) -> str:
    """Comment header (sorted key=value lines + timestamp), then the table."""
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}={_cell(meta[key])}\n")
    buf.write(f"# generated={_timestamp()}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
    return buf.getvalue()


def render_json(payload: dict, meta: dict) -> str:
    doc = {"config": jsonable(meta), "generated": _timestamp()}
    doc.update(jsonable(payload))
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit(text: str, output: str | None) -> None:
    """Write to the output path, or to stdout when no path was given."""
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def strip_timestamp(text: str) -> str:
    """Drop the generated line so reruns compare byte-identical."""
    lines = [
        ln
        for ln in text.splitlines()
        if not ln.startswith("# generated=") and '"generated"' not in ln
    ]
    return "\n".join(lines)


def figure_path(output: str) -> str:
    return str(Path(output).with_suffix(".png"))


def save_series_figure(
    path: str,
    series: Sequence[tuple[Sequence[float], Sequence[float], str]],
    xlabel: str,
    ylabel: str,
    title: str,
    logx: bool = False,
    logy: bool = False,
    fit: tuple[float, float, str] | None = None,
) -> str:
    """One set of axes, one line per (xs, ys, label), optional fitted line."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for xs, ys, label in series:
        ax.plot(xs, ys, "o-", markersize=3.5, linewidth=1.0, label=label or None)
    if fit is not None:
        slope, intercept, label = fit
        xs_all = [x for xs, _, _ in series for x in xs]
        grid = [min(xs_all), max(xs_all)]
        ax.plot(grid, [slope * x + intercept for x in grid], "--", linewidth=1.0, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if any(label for _, _, label in series) or fit is not None:
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
