"""Table emission (CSV / JSON) and companion figure rendering.

CSV output is RFC-4180-style: header row, CRLF line endings, '.' decimal
separator, shortest round-trip float representation.  JSON output carries a
schema identifier.  When plotting is requested the same rows are rendered
to a PNG next to the table so a report run leaves both artifacts.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "format_cell",
    "rows_to_csv",
    "rows_to_json",
    "write_table",
    "plot_path_for",
    "render_cdf_plot",
    "render_metric_plot",
    "render_order_plot",
]

# Constant PNG metadata keeps renders byte-identical across library versions.
_PNG_METADATA = {"Software": "kthbest"}


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # csv default: CRLF terminators, minimal quoting
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def rows_to_json(
    schema: str,
    columns: Sequence[str],
    rows: Sequence[Sequence],
    extra: dict | None = None,
) -> str:
    payload: dict = {"schema": schema, "columns": list(columns)}
    if extra:
        payload.update(extra)
    payload["rows"] = [
        [None if isinstance(v, float) and math.isnan(v) else v for v in row] for row in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def write_table(
    columns: Sequence[str],
    rows: Sequence[Sequence],
    schema: str,
    path: str | None,
    fmt: str,
    extra: dict | None = None,
) -> str:
    """Serialize and either write to ``path`` or return for stdout."""
    if fmt == "csv":
        text = rows_to_csv(columns, rows)
    elif fmt == "json":
        text = rows_to_json(schema, columns, rows, extra)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def plot_path_for(out_path: str) -> str:
    return str(Path(out_path).with_suffix(".png"))


def _new_axes(xlabel: str, ylabel: str, title: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=120)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3, linestyle="--")
    return fig, ax


def _save(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def render_cdf_plot(columns: Sequence[str], rows: Sequence[Sequence], path: str, title: str) -> None:
    """Theory curves as lines, empirical curves as sparse markers, one
    colour per rank."""
    cols = {name: [row[i] for row in rows] for i, name in enumerate(columns)}
    z = cols["z"]
    fig, ax = _new_axes("z", "CDF", title)
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    ranks = sorted({name.rsplit("_k", 1)[1] for name in columns if "_k" in name})
    for idx, rank in enumerate(ranks):
        color = colors[idx % len(colors)]
        for name in columns:
            if not name.endswith(f"_k{rank}"):
                continue
            kind = name.rsplit("_k", 1)[0]
            if kind == "empirical":
                step = max(1, len(z) // 40)
                ax.plot(
                    z[::step],
                    cols[name][::step],
                    linestyle="none",
                    marker="o",
                    markersize=3.5,
                    color=color,
                    label=f"MC k={rank}",
                )
            else:
                style = {"theory_normalized": "-", "theory_unnormalized": "-", "finite_m": "--", "exact": ":"}
                ax.plot(z, cols[name], style.get(kind, "-"), color=color, label=f"{kind} k={rank}")
    ax.legend(fontsize=8)
    _save(fig, path)


def render_metric_plot(
    columns: Sequence[str], rows: Sequence[Sequence], path: str, title: str, ylabel: str, logy: bool
) -> None:
    cols = {name: [row[i] for row in rows] for i, name in enumerate(columns)}
    fig, ax = _new_axes("k (selection rank)", ylabel, title)
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    m_values = sorted(set(cols["m"]))
    for idx, m in enumerate(m_values):
        sel = [i for i, mm in enumerate(cols["m"]) if mm == m]
        ks = [cols["k"][i] for i in sel]
        theory = [cols["theory"][i] for i in sel]
        mc = [cols["mc_estimate"][i] for i in sel]
        color = colors[idx % len(colors)]
        ax.plot(ks, theory, "-", color=color, label=f"theory M={m}")
        ax.plot(ks, mc, "o", color=color, markersize=4, label=f"MC M={m}")
    if logy:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    _save(fig, path)


def render_order_plot(columns: Sequence[str], rows: Sequence[Sequence], path: str, title: str) -> None:
    cols = {name: [row[i] for row in rows] for i, name in enumerate(columns)}
    fig, ax = _new_axes("z", "normalized position", title)
    ax.plot(cols["z"], cols["second_position"], "-", label="(z - b2)/a2")
    ax.plot(cols["z"], cols["first_position"], "--", label="(z - b1)/a1")
    ax.legend(fontsize=8)
    _save(fig, path)
