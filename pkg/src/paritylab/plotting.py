"""Render the CLI data products as figure files next to their CSVs.

matplotlib is imported lazily with the Agg backend so data-only runs
never touch it.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams["figure.figsize"] = (6.0, 4.0)
    plt.rcParams["font.size"] = 9
    return plt


def save_trajectory_plot(path, rows_by_backend: dict[str, tuple[Sequence[float], Sequence[float]]],
                         title: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots()
    for backend, (ts, ws) in rows_by_backend.items():
        ax.plot(ts, ws, label=backend)
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel(r"decay time $\gamma t$")
    ax.set_ylabel(r"$W(0,0)$")
    ax.set_title(title)
    if len(rows_by_backend) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_surface_plot(path, etas: np.ndarray, times: np.ndarray,
                      w00: np.ndarray, title: str) -> None:
    """Heat map of W(0,0) over (gamma_t, eta); w00 indexed [eta, time]."""
    plt = _pyplot()
    fig, ax = plt.subplots()
    vmax = float(np.max(np.abs(w00)))
    mesh = ax.pcolormesh(times, etas, w00, cmap="RdBu_r", vmin=-vmax, vmax=vmax,
                         shading="auto")
    fig.colorbar(mesh, ax=ax, label=r"$W(0,0)$")
    ax.set_xlabel(r"decay time $\gamma t$")
    ax.set_ylabel(r"$\eta$")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_slice_plot(path, qs: np.ndarray, rows_by_time: dict[float, np.ndarray],
                    title: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots()
    for t, ws in rows_by_time.items():
        ax.plot(qs, ws, label=rf"$\gamma t={t:.4g}$")
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel(r"$q$")
    ax.set_ylabel(r"$W(q, 0)$")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_trace_plot(path, taus: np.ndarray, p_ground: np.ndarray, title: str,
                    max_span: float = 8.0 * math.pi) -> None:
    plt = _pyplot()
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(6.0, 5.0))
    keep = taus <= max_span
    ax0.plot(taus[keep], p_ground[keep], lw=0.8)
    ax0.set_xlabel(r"$\tau$")
    ax0.set_ylabel(r"$P_g$")
    ax0.set_title(title + " (early window)")
    ax1.plot(taus, p_ground, lw=0.3)
    ax1.set_xlabel(r"$\tau$")
    ax1.set_ylabel(r"$P_g$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
