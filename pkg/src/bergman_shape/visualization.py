#!/usr/bin/env python3
"""
SVG rendering of reconstructed and reference boundary curves with matplotlib.
"""

from collections.abc import Sequence
from io import StringIO

from bergman_shape.reconstruction import CurveSample

MARGIN = 0.05


# === INTERNAL HELPERS ===

def _setup_matplotlib():
    """Lazy import and configure matplotlib with non-interactive backend.

    Returns:
        Tuple of (matplotlib, pyplot, numpy) modules or raises ImportError
    """
    try:
        import matplotlib
        matplotlib.use('Agg')  # Non-interactive backend
        matplotlib.rcParams['svg.hashsalt'] = 'bergman-shape'
        import matplotlib.pyplot as plt
        import numpy as np
        return matplotlib, plt, np
    except ImportError as e:
        raise ImportError(
            "Matplotlib not available. "
            "Install with: pip install bergman-shape-recovery[plotting] "
            "or: uv sync --extra plotting"
        ) from e


def _validate_color_scheme(color: str | None, default: str = '#2E86AB') -> str:
    """Validate and return a color hex code.

    Args:
        color: Color name or hex code, or None for default
        default: Hex code used when color is None or unrecognized

    Returns:
        Valid hex color code
    """
    default_colors = {
        'blue': '#2E86AB',
        'red': '#C73E1D',
        'green': '#06A77D',
        'purple': '#A23B72',
        'orange': '#F18F01',
        'teal': '#4A90A4',
        'pink': '#D81159',
    }

    if color is None:
        return default
    if color.lower() in default_colors:
        return default_colors[color.lower()]
    if color.startswith('#') and len(color) == 7:
        return color
    return default


def _closed_polyline(samples: Sequence[CurveSample]) -> tuple[list[float], list[float]]:
    xs = [float(s.point.real) for s in samples]
    ys = [float(s.point.imag) for s in samples]
    return xs + xs[:1], ys + ys[:1]


def _padded_limits(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    pad = MARGIN * (hi - lo) if hi > lo else 1.0
    return lo - pad, hi + pad


# === CURVE PLOTS ===

def render_curves_svg(
    reconstructed: Sequence[CurveSample],
    reference: Sequence[CurveSample] | None = None,
    title: str = "Reconstructed boundary",
    color: str | None = None,
    reference_color: str | None = None,
) -> str:
    """Draw the reconstructed curve solid and the reference (if any) dashed.

    Returns:
        SVG document text

    Raises:
        ValueError: If the reconstructed curve has fewer than 3 samples
        ImportError: If matplotlib is not installed
    """
    if len(reconstructed) < 3:
        raise ValueError("Need at least 3 curve samples to draw a boundary")

    _, plt, _ = _setup_matplotlib()
    fig, ax = plt.subplots(figsize=(6, 6))

    all_x: list[float] = []
    all_y: list[float] = []
    if reference:
        rx, ry = _closed_polyline(reference)
        ax.plot(rx, ry, linestyle='--', linewidth=1.2,
                color=_validate_color_scheme(reference_color, '#C73E1D'), label='reference')
        all_x += rx
        all_y += ry
    x, y = _closed_polyline(reconstructed)
    ax.plot(x, y, linestyle='-', linewidth=1.5, color=_validate_color_scheme(color), label='reconstruction')
    all_x += x
    all_y += y

    ax.set_xlim(*_padded_limits(all_x))
    ax.set_ylim(*_padded_limits(all_y))
    ax.set_aspect('equal', adjustable='datalim')
    ax.set_title(title, fontsize=12, fontweight='bold')
    ax.grid(True, alpha=0.3)
    if reference:
        ax.legend(loc='best')

    buffer = StringIO()
    fig.savefig(buffer, format='svg', bbox_inches='tight', metadata={'Date': None})
    plt.close(fig)
    return buffer.getvalue()
