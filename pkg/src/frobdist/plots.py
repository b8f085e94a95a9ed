"""Figure rendering for the CLI report path.

Every subcommand that writes delimited artifacts into --out also drops a
matplotlib figure next to them.  Rendering is headless (Agg) and all data
comes from the already-computed report objects, so figures never change the
numbers.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .equidist import DistributionReport, Interval, RatioSequence, limit_density


def histogram_figure(report: DistributionReport, path) -> None:
    """64-bin frequency histogram with the limit density overlaid."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    edges = np.asarray(report.bin_edges)
    counts = np.asarray(report.histogram, dtype=float)
    widths = np.diff(edges)
    density = counts / counts.sum() / widths
    ax.bar(edges[:-1], density, width=widths, align="edge",
           color="#7aa6c2", edgecolor="white", linewidth=0.3,
           label="empirical")
    xs = 0.5 * (edges[:-1] + edges[1:])
    lam = [
        limit_density(report.g, Interval(float(a), float(b)), 1e-6).value / w
        for a, b, w in zip(edges[:-1], edges[1:], widths)
    ]
    ax.plot(xs, lam, color="#c23b22", linewidth=1.4, label="limit density")
    ax.set_xlabel("normalized trace ratio")
    ax.set_ylabel("density")
    ax.set_title(f"ratio distribution, N = {report.n}, genus {report.g}")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def ratio_figure(seq: RatioSequence, path, max_points: int = 5000) -> None:
    """Scatter of alpha_n against n (subsampled beyond max_points)."""
    n = seq.n
    idx = np.arange(1, n + 1)
    vals = seq.values
    if n > max_points:
        stride = n // max_points
        idx, vals = idx[::stride], vals[::stride]
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(idx, vals, ".", markersize=2, color="#33577b", alpha=0.6)
    ax.set_ylim(-1.05, 1.05)
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    ax.set_title(f"normalized traces, q = {seq.q}, genus {seq.g} ({seq.mode})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def kronecker_figure(points: np.ndarray, path, max_points: int = 5000) -> None:
    """Kronecker sequence: scatter in 2-d, index plot in 1-d."""
    pts = points[:: max(1, len(points) // max_points)]
    fig, ax = plt.subplots(figsize=(5.5, 5.5) if pts.shape[1] >= 2 else (7, 4.2))
    if pts.shape[1] >= 2:
        ax.plot(pts[:, 0], pts[:, 1], ".", markersize=2.5, color="#33577b")
        ax.set_xlabel("{n theta_1}")
        ax.set_ylabel("{n theta_2}")
        ax.set_aspect("equal")
    else:
        ax.plot(np.arange(1, len(pts) + 1), pts[:, 0], ".",
                markersize=2.5, color="#33577b")
        ax.set_xlabel("n")
        ax.set_ylabel("{n theta}")
    ax.set_title(f"Kronecker points, N = {len(points)}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def census_figure(fractions: dict, traces: list[int], path) -> None:
    """Kind fractions and the trace histogram of a census."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    keys = ["ordinary", "supersingular", "intermediate"]
    ax1.bar(keys, [fractions[k] for k in keys], color="#7aa6c2")
    ax1.set_ylabel("fraction of curves")
    ax1.set_ylim(0, 1)
    ax1.tick_params(axis="x", rotation=20)
    lo, hi = min(traces), max(traces)
    ax2.hist(traces, bins=np.arange(lo - 0.5, hi + 1.5), color="#33577b",
             edgecolor="white")
    ax2.set_xlabel("trace of Frobenius")
    ax2.set_ylabel("curves")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
