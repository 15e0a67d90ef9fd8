"""Delimited output and figure rendering.

CSV is the data boundary: fixed, documented columns, every float printed
with nine significant digits so a rerun under the same seed is
byte-identical.  Figures are a convenience rendered next to the CSV from
the same rows -- they never feed back into any computation.
"""

from __future__ import annotations

import csv
import io
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

FLOAT_FORMAT = "%.9g"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def rows_to_csv(rows, columns=None) -> str:
    """Render dict rows to CSV text (header + one line per row)."""
    if not rows:
        raise ValueError("no rows to write")
    if columns is None:
        columns = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(rows, path, columns=None) -> str:
    text = rows_to_csv(rows, columns)
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(text)
    return path


def read_csv(path) -> list:
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def _figure_path(csv_path: str, suffix: str) -> str:
    stem, _ext = os.path.splitext(csv_path)
    return f"{stem}_{suffix}.png"


def _numeric(rows, key):
    out = []
    for row in rows:
        value = row.get(key, "")
        if value in ("", None):
            out.append(float("nan"))
        else:
            out.append(float(value))
    return out


def _render_scenario(rows, csv_path):
    """Power and SER curves, one line per design mode, for sweep rows."""
    written = []
    by_mode = {}
    for row in rows:
        label = str(row.get("design_mode", "run"))
        if row.get("sweep_param"):
            xs = float(row["sweep_value"])
        else:
            xs = float(len(by_mode.get(label, [])))
        by_mode.setdefault(label, []).append((xs, row))
    x_label = str(rows[0].get("sweep_param") or "point")

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, pairs in by_mode.items():
        xs = [p[0] for p in pairs]
        ys = [float(p[1]["mean_power_db"]) for p in pairs]
        ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel(x_label)
    ax.set_ylabel("mean transmit power (dB)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    path = _figure_path(csv_path, "power")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    ser_keys = [k for k in ("ser_users", "ser_eve_zf", "ser_eve_mmse",
                            "ser_eve_brute")
                if any(row.get(k) not in ("", None) for row in rows)]
    if ser_keys:
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, pairs in by_mode.items():
            xs = [p[0] for p in pairs]
            for key in ser_keys:
                ys = [float(p[1][key]) if p[1].get(key) not in ("", None)
                      else float("nan") for p in pairs]
                floor = [max(y, 1e-6) for y in ys]
                ax.semilogy(xs, floor, marker=".",
                            label=f"{label}:{key.removeprefix('ser_')}")
        ax.set_xlabel(x_label)
        ax.set_ylabel("SER (floored at 1e-6)")
        ax.grid(True, which="both", alpha=0.4)
        ax.legend(fontsize=7)
        path = _figure_path(csv_path, "ser")
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written


def _render_profile(rows, csv_path):
    angles = _numeric(rows, "angle_deg")
    ser = [max(s, 1e-6) for s in _numeric(rows, "ser")]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(angles, ser)
    ax.set_xlabel("receiver angle (deg)")
    ax.set_ylabel("SER (floored at 1e-6)")
    ax.grid(True, which="both", alpha=0.4)
    path = _figure_path(csv_path, "profile")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [path]


def _render_timing(rows, csv_path):
    sizes = _numeric(rows, "table_size")
    builds = _numeric(rows, "build_seconds")
    queries = _numeric(rows, "query_seconds")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(sizes, builds, marker="o", label="table build")
    ax.loglog(sizes, queries, marker="s", label="per-query")
    ax.set_xlabel("lookup table size")
    ax.set_ylabel("seconds")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    path = _figure_path(csv_path, "timing")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [path]


def render_figures(rows, csv_path) -> list:
    """PNGs next to the CSV; the row schema picks the figure type."""
    if not rows:
        return []
    keys = rows[0].keys()
    if "angle_deg" in keys:
        return _render_profile(rows, csv_path)
    if "table_size" in keys:
        return _render_timing(rows, csv_path)
    if "design_mode" in keys:
        return _render_scenario(rows, csv_path)
    return []
