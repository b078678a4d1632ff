"""Render the sweep/scan/map tables to figure files.

Companion to the CLI report commands: whatever lands in the CSV can also be
written as a PNG next to it.  Rendering is headless (Agg).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .snri import SnriMap

_SCHEME_STYLE = [
    ("closed_homodyne_full", "dual homodyne, full", "k-"),
    ("closed_homodyne_conjugate", "conjugate homodyne", "r--"),
    ("closed_intensity_dual", "dual intensity", "k--"),
    ("closed_homodyne_truncated", "dual homodyne, truncated", "b:"),
]


def plot_gain_sweep(columns: list[str], rows: list[list[float]], path: str) -> None:
    """Scaled phase variance of each detection scheme versus gain."""
    data = np.asarray(rows, dtype=float)
    gains = data[:, columns.index("gain")]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    for name, label, style in _SCHEME_STYLE:
        if name in columns:
            ax.plot(gains, data[:, columns.index(name)], style, label=label, lw=1.4)
    ax.plot(
        gains,
        data[:, columns.index("qfi_limit")],
        "o",
        ms=3.5,
        mfc="none",
        color="gray",
        label="quantum Fisher limit",
    )
    ax.set_yscale("log")
    ax.set_xlabel("gain G")
    ax.set_ylabel(r"$|\alpha|^2\,\Delta^2\phi$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_snri_scan(
    phi_p: np.ndarray, snri_db: np.ndarray, snri_limit_db: np.ndarray | None, path: str
) -> None:
    """SNRI versus probe homodyne phase, with the Fisher-limit curve if given."""
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.plot(phi_p, snri_db, "r-", lw=1.4, label="joint quadrature")
    if snri_limit_db is not None:
        ax.plot(phi_p, snri_limit_db, "k--", lw=1.2, label="Fisher-information limit")
    ax.axhline(0.0, color="gray", lw=0.8)
    ax.set_xlabel(r"$\phi_p$ (rad)")
    ax.set_ylabel("SNRI (dB)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_snri_map(result: SnriMap, path: str) -> None:
    """SNRI over both homodyne phases plus the mean lock signals."""
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(6, 7), gridspec_kw={"height_ratios": [3, 1]}
    )
    mesh = ax0.pcolormesh(
        result.phi_p, result.phi_c, result.snri_db.T, shading="nearest", cmap="viridis"
    )
    fig.colorbar(mesh, ax=ax0, label="SNRI (dB)")
    ax0.set_xlabel(r"$\phi_p$ (rad)")
    ax0.set_ylabel(r"$\phi_c$ (rad)")
    ax1.plot(result.phi_p, result.probe_signal, "b-", lw=1.2, label=r"$\langle j_p\rangle$")
    ax1.plot(result.phi_c, result.conjugate_signal, "r--", lw=1.2, label=r"$\langle j_c\rangle$")
    ax1.axhline(0.0, color="gray", lw=0.8)
    ax1.set_xlabel("homodyne phase (rad)")
    ax1.set_ylabel("mean signal / |alpha|")
    ax1.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
