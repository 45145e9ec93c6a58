"""Render plot-data series to a PNG."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def render_queries(series: list[dict], path: str, title: str | None = None) -> str:
    """Mean queries against ``n/m``, one line per algorithm, bounds dashed."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    names = sorted({s["algorithm"] for s in series})
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, name in enumerate(names):
        pts = sorted((s for s in series if s["algorithm"] == name), key=lambda s: s["n_over_m"])
        x = [s["n_over_m"] for s in pts]
        c = colors[i % len(colors)]
        ax.plot(x, [s["mean_queries"] for s in pts], "o-", color=c, ms=3, lw=1.2, label=name)
        bx = [s["n_over_m"] for s in pts if s.get("mean_bound") is not None]
        if bx:
            by = [s["mean_bound"] for s in pts if s.get("mean_bound") is not None]
            ax.plot(bx, by, "--", color=c, lw=0.9, alpha=0.7, label=f"{name} bound")
    if series:
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.legend(fontsize=7, frameon=False)
    ax.set_xlabel("n / m")
    ax.set_ylabel("queries")
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(True, which="both", lw=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
