"""Figure rendering for the ``report`` command.

Plots are drawn from the same rows the CSV tables carry, so the figures are
a view of the delimited output, never an extra data source.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _rows_at_lambda(rows: list[dict], lam: float) -> list[dict]:
    return [r for r in rows if r["lambda"] == lam]


def _plot_bounds_vs_p(bnd_rows: list[dict], lam: float, path: Path, dpi: int) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = sorted({r["n"] for r in bnd_rows})
    for n in ns:
        sel = sorted((r for r in bnd_rows if r["n"] == n), key=lambda r: r["p"])
        ps = [r["p"] for r in sel]
        ax.plot(ps, [r["conjectured"] for r in sel], "-o", ms=3, label=f"conjectured, n={n}")
        ax.plot(ps, [r["nonsharp"] for r in sel], "--", label=f"non-sharp, n={n}")
    ax.set_yscale("log")
    ax.set_xlabel("pole location p")
    ax.set_ylabel("coefficient bound")
    ax.set_title(f"conjectured vs non-sharp bound (lambda = {lam:g})")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def _plot_slack_vs_p(bnd_rows: list[dict], lam: float, path: Path, dpi: int) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for n in sorted({r["n"] for r in bnd_rows}):
        sel = sorted((r for r in bnd_rows if r["n"] == n), key=lambda r: r["p"])
        ax.plot([r["p"] for r in sel], [r["slack"] for r in sel], "-o", ms=3, label=f"n={n}")
    ax.set_xlabel("pole location p")
    ax.set_ylabel("non-sharp minus conjectured")
    ax.set_title(f"bound slack (lambda = {lam:g})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def _plot_coeff_growth(ext_rows: list[dict], lam: float, path: Path, dpi: int) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for p in sorted({r["p"] for r in ext_rows}):
        sel = sorted((r for r in ext_rows if r["p"] == p), key=lambda r: r["n"])
        ax.plot([r["n"] for r in sel], [r["extremal_coeff"] for r in sel],
                "-o", ms=3, label=f"p={p:g}")
    ax.set_yscale("log")
    ax.set_xlabel("coefficient index n")
    ax.set_ylabel("boundary-member coefficient")
    ax.set_title(f"coefficient growth of the saturating member (lambda = {lam:g})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def render_bound_figures(ext_rows: list[dict], bnd_rows: list[dict],
                         outdir: Path, dpi: int = 150) -> list[Path]:
    """Render the standard figures next to the CSV tables; returns the paths."""
    outdir = Path(outdir)
    lam = max(r["lambda"] for r in ext_rows)
    paths = []
    jobs = [
        ("bounds_vs_p.png", _plot_bounds_vs_p, _rows_at_lambda(bnd_rows, lam)),
        ("bound_slack_vs_p.png", _plot_slack_vs_p, _rows_at_lambda(bnd_rows, lam)),
        ("coeff_growth.png", _plot_coeff_growth, _rows_at_lambda(ext_rows, lam)),
    ]
    for name, draw, rows in jobs:
        if not rows:
            continue
        path = outdir / name
        draw(rows, lam, path, dpi)
        paths.append(path)
    return paths
