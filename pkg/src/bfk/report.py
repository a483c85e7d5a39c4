"""Figures for spectral sequence pages."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .ainf import SpectralSequence  # noqa: E402


def page_matrix(ss: SpectralSequence, r: int) -> tuple[list, list, list]:
    """(block labels, levels, dims[block][level]) for page r."""
    page = ss.pages[min(r, len(ss.pages) - 1)]
    blocks = sorted({blk for blk, _ in page}, key=str)
    levels = list(ss.levels)
    grid = [[page.get((b, p), 0) for p in levels] for b in blocks]
    return blocks, levels, grid


def render_pages(ss: SpectralSequence, outdir: str | Path, title: str = "") -> list[Path]:
    """Write one heatmap per page, rows idempotent pairs, columns filtration levels."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for r in range(len(ss.pages)):
        blocks, levels, grid = page_matrix(ss, r)
        fig, ax = plt.subplots(figsize=(2 + 0.8 * len(levels), 1 + 0.35 * max(len(blocks), 1)))
        ax.imshow(grid or [[0]], cmap="Blues", aspect="auto", vmin=0)
        for i, row in enumerate(grid):
            for j, v in enumerate(row):
                if v:
                    ax.text(j, i, str(v), ha="center", va="center", fontsize=8)
        ax.set_xticks(range(len(levels)), [str(p) for p in levels])
        ax.set_yticks(range(len(blocks)), [str(b) for b in blocks], fontsize=7)
        ax.set_xlabel("filtration level")
        ax.set_title(f"{title} E{r} (dim {ss.dims(r)})".strip(), fontsize=9)
        fig.tight_layout()
        path = outdir / f"page_E{r}.png"
        fig.savefig(path, dpi=100)
        plt.close(fig)
        paths.append(path)
    return paths
