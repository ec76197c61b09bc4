"""Matplotlib figure rendering for the CLI report path.

Figures are presentation-only; all acceptance checks run on the CSV/JSON
output.  Files are written atomically like every other report artifact.
"""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def geometry_figure(title, curves=(), polygons=(), evolutes=(), combs=()):
    """2D/3D figure of curves, control polygons, evolute traces and curvature combs.

    Each entry is (label, array); curve/evolute arrays are sampled points,
    polygon arrays are vertex lists, comb entries are (m, 2, dim) segment pairs.
    """
    datasets = [d for _, d in (*curves, *polygons, *evolutes)]
    dim = datasets[0].shape[1] if datasets else 2
    fig = plt.figure(figsize=(7, 6))
    if dim == 3:
        ax = fig.add_subplot(projection="3d")
    else:
        ax = fig.add_subplot()
        ax.set_aspect("equal", adjustable="datalim")
    for label, pts in curves:
        ax.plot(*pts.T, label=label, linewidth=1.4)
    for label, pts in polygons:
        ax.plot(*pts.T, "o--", label=label, linewidth=0.9, markersize=3.5, alpha=0.8)
    for label, pts in evolutes:
        ax.plot(*pts.T, ":", label=label, linewidth=1.1)
    for _label, segments in combs:
        for seg in segments:
            ax.plot(*seg.T, color="0.6", linewidth=0.4)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    if dim == 2:
        ax.grid(True, linewidth=0.3, alpha=0.5)
    return fig


def profiles_figure(title, panels):
    """Stacked panels of sampled functions: panels = [(name, [(label, s, f), ...]), ...]."""
    fig, axes = plt.subplots(len(panels), 1, figsize=(7, 2.6 * len(panels)), squeeze=False)
    for ax, (name, series) in zip(axes[:, 0], panels):
        for label, s, f in series:
            ax.plot(s, f, label=label, linewidth=1.1)
        ax.set_ylabel(name)
        ax.grid(True, linewidth=0.3, alpha=0.5)
        ax.legend(loc="best", fontsize=8)
    axes[-1, 0].set_xlabel("arc length s")
    fig.suptitle(title)
    fig.tight_layout()
    return fig


def curvature_comb(points, normals, kappa, scale=None, every=4):
    """Comb segments C(t) - scale*kappa*N(t) for plotting."""
    import numpy as np

    if scale is None:
        span = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
        kmax = float(np.nanmax(kappa))
        scale = 0.15 * span / kmax if kmax > 0 else 1.0
    idx = np.arange(0, len(points), every)
    tips = points[idx] - scale * kappa[idx, None] * normals[idx]
    return np.stack([points[idx], tips], axis=1)


def save_figure(fig, path) -> None:
    """Atomic figure write; format follows the file extension."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    ext = os.path.splitext(path)[1].lstrip(".") or "svg"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix="." + ext)
    os.close(fd)
    try:
        fig.savefig(tmp, format=ext)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)
