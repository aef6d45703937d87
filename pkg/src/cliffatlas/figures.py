"""Matplotlib renderings of the two-qubit geometry and of claim reports."""

from __future__ import annotations

import math
from collections import Counter

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .geometry import PauliGeometry, classify_line_entanglement, ring_projective_line_grid  # noqa: E402

STATUS_COLORS = {"pass": "#3a7d44", "fail": "#b23a48", "uncertified": "#e0a030", "skipped": "#9a9a9a"}


def _positions(geom: PauliGeometry) -> list[tuple[float, float]]:
    """Nonlocal points on the ring grid (entangled lines become rows and columns), local ones on a ring."""
    grid = ring_projective_line_grid(geom)
    at = {}
    for line_no, line in enumerate(grid.rows):
        for k in line:
            col = next(c for c, cl in enumerate(grid.cols) if k in cl)
            at[grid.pauli_map[k]] = (float(col), -float(line_no))
    locals_ = [lab for lab in geom.labels if "I" in lab]
    for t, lab in enumerate(sorted(locals_, key=lambda s: (s[0] == "I", s))):
        ang = math.pi / 2 + 2 * math.pi * t / len(locals_)
        at[lab] = (1 + 2.4 * math.cos(ang), -1 + 2.4 * math.sin(ang))
    return [at[lab] for lab in geom.labels]


def draw_geometry(geom: PauliGeometry, path) -> None:
    """The two-qubit geometry with the entangled lines bold."""
    if geom.n != 2:
        raise ValueError("drawing is for the two-qubit geometry")
    pos = _positions(geom)
    tags = classify_line_entanglement(geom)
    fig, ax = plt.subplots(figsize=(6, 6))
    for line, tag in zip(geom.lines, tags):
        if tag == "entangled":
            xs, ys = zip(*sorted(pos[p] for p in line))
            ax.plot(xs, ys, color="black", lw=3.0, zorder=1)
        else:
            # local, nonlocal, local
            mid = next(p for p in line if "I" not in geom.labels[p])
            ends = [p for p in line if p != mid]
            xs, ys = zip(pos[ends[0]], pos[mid], pos[ends[1]])
            ax.plot(xs, ys, color="#7a8ca8", lw=1.0, ls="--", zorder=0)
    for k, (x, y) in enumerate(pos):
        ax.scatter([x], [y], s=420, color="white", edgecolor="black", zorder=2)
        ax.annotate(geom.display(k), (x, y), ha="center", va="center", fontsize=10, zorder=3)
        ax.annotate(geom.labels[k], (x + 0.18, y + 0.18), fontsize=7, color="#555555", zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title("Two-qubit Pauli geometry, entangled lines bold")
    fig.savefig(path, bbox_inches="tight", dpi=120)
    plt.close(fig)


def draw_status_chart(records, path) -> None:
    """Stacked bars of claim status per area."""
    areas = sorted({r["claim_id"].split(".")[0] for r in records})
    counts = {a: Counter(r["status"] for r in records if r["claim_id"].split(".")[0] == a) for a in areas}
    fig, ax = plt.subplots(figsize=(7, 0.45 * len(areas) + 1.2))
    left = [0] * len(areas)
    for status, color in STATUS_COLORS.items():
        vals = [counts[a][status] for a in areas]
        ax.barh(areas, vals, left=left, color=color, label=status)
        left = [lo + v for lo, v in zip(left, vals)]
    ax.set_xlabel("claims")
    ax.invert_yaxis()
    ax.legend(loc="lower right", fontsize=8)
    fig.savefig(path, bbox_inches="tight", dpi=120)
    plt.close(fig)
