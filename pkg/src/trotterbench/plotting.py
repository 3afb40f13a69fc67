"""Figure rendering for the reproduce path. Convenience output; the CSVs are
the tested product."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _new_axes(width=6.0):
    fig, ax = plt.subplots(figsize=(width, width * GOLDEN))
    return fig, ax


def plot_family(solutions, path: str | Path) -> None:
    """Coefficient curves a_i(a4), one line per coefficient per branch."""
    fig, ax = _new_axes()
    branches = sorted({s.branch_id for s in solutions})
    styles = ["-", "--", ":", "-."]
    for b in branches:
        pts = [s for s in solutions if s.branch_id == b]
        a4 = [s.a4 for s in pts]
        for i, label in ((0, "a1"), (1, "a2"), (2, "a3"), (4, "a5")):
            ax.plot(
                a4,
                [s.a[i] for s in pts],
                styles[b % len(styles)],
                label=f"{label}" + (f" (branch {b})" if len(branches) > 1 else ""),
            )
    ax.set_xlabel("a4")
    ax.set_ylabel("coefficient value")
    ax.legend(fontsize=8, ncol=2)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(rows, path: str | Path, spectral_panel: bool = False) -> None:
    """Log-log energy-shift curves per formula, optionally with a spectral-error panel."""
    ncols = 2 if spectral_panel else 1
    fig, axes = plt.subplots(1, ncols, figsize=(6.0 * ncols, 6.0 * GOLDEN))
    axes = np.atleast_1d(axes)
    names = list(dict.fromkeys(r.formula for r in rows))
    for name in names:
        pts = [r for r in rows if r.formula == name and r.flag != "aliasing"]
        s = np.array([r.s for r in pts])
        de = np.abs([r.exact_delta_e for r in pts])
        axes[0].loglog(s, de, "o-", ms=3, label=name)
        if spectral_panel:
            sp = np.abs([r.spectral_error for r in pts])
            axes[1].loglog(s, sp, "s-", ms=3, label=name)
    axes[0].set_xlabel("step size s")
    axes[0].set_ylabel("|energy shift|")
    axes[0].legend(fontsize=8)
    axes[0].grid(alpha=0.3, which="both")
    if spectral_panel:
        axes[1].set_xlabel("step size s")
        axes[1].set_ylabel("spectral error")
        axes[1].legend(fontsize=8)
        axes[1].grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
