"""Self-contained SVG heatmap rendering for phase-transition grids.

Hand-rolled so that output bytes depend only on the input numbers; one
panel per algorithm, cells colored on a fixed dark-to-light ramp over
[0, 1] recovery rate.
"""

from __future__ import annotations

import numpy as np

__all__ = ["render_phase_svg"]

# anchor colors for rate 0.0 .. 1.0 (dark violet -> teal -> yellow)
_RAMP = (
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
)

CELL = 34
PAD_LEFT = 64
PAD_TOP = 34
PAD_BOTTOM = 26
PANEL_GAP = 26


def _color(rate: float) -> str:
    r = min(1.0, max(0.0, float(rate)))
    for (t0, c0), (t1, c1) in zip(_RAMP, _RAMP[1:]):
        if r <= t1:
            f = 0.0 if t1 == t0 else (r - t0) / (t1 - t0)
            rgb = tuple(int(round(a + f * (b - a))) for a, b in zip(c0, c1))
            return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"
    return "#fde725"


def render_phase_svg(matrices: dict, ratio_grid, n_grid, title: str = "recovery rate") -> str:
    """Return SVG text: one panel per algorithm label in `matrices`.

    Each matrix has rows aligned with ratio_grid and columns with n_grid.
    """
    labels = list(matrices)
    rows = len(ratio_grid)
    cols = len(n_grid)
    panel_w = PAD_LEFT + cols * CELL
    panel_h = PAD_TOP + rows * CELL + PAD_BOTTOM
    width = len(labels) * panel_w + (len(labels) - 1) * PANEL_GAP + 10
    height = panel_h + 10
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<style>text{font-family:monospace;font-size:11px;fill:#222}</style>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for p, label in enumerate(labels):
        ox = 5 + p * (panel_w + PANEL_GAP)
        oy = 5
        parts.append(f'<text x="{ox + PAD_LEFT}" y="{oy + 14}">{label} ({title})</text>')
        mat = np.asarray(matrices[label])
        for r in range(rows):
            for c in range(cols):
                x = ox + PAD_LEFT + c * CELL
                y = oy + PAD_TOP + r * CELL
                parts.append(
                    f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                    f'fill="{_color(mat[r, c])}">'
                    f'<title>{label} N={n_grid[c]} ratio={ratio_grid[r]:.4f} '
                    f'rate={mat[r, c]:.4f}</title></rect>'
                )
        for r, ratio in enumerate(ratio_grid):
            y = oy + PAD_TOP + r * CELL + CELL // 2 + 4
            parts.append(f'<text x="{ox + 4}" y="{y}">{ratio:.3f}</text>')
        for c, n in enumerate(n_grid):
            x = ox + PAD_LEFT + c * CELL + 4
            y = oy + PAD_TOP + rows * CELL + 16
            parts.append(f'<text x="{x}" y="{y}">{n}</text>')
        parts.append(
            f'<text x="{ox + 4}" y="{oy + PAD_TOP - 6}">k/N</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
