"""Optional SVG renderings of the plot-data files (needs matplotlib)."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List

from .errors import IoError


def _read(path: Path):
    with open(path, encoding="utf-8") as fh:
        comment = fh.readline()[1:].strip()
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {name: [r[i] for r in body] for i, name in enumerate(header)}
    return comment, cols


def _floats(col):
    return [float(v) if v != "" else float("nan") for v in col]


def render_svgs(paths: Dict[str, Path], out_dir: Path) -> List[Path]:
    """Render each plot-data file to ``<name>.svg`` beside it."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise ImportError("SVG output needs matplotlib (pip install 'artifact[plots]')") from exc

    # Fixed metadata so repeated renders are byte-identical.
    plt.rcParams["svg.hashsalt"] = "gainstats"
    written = []
    for name, path in paths.items():
        comment, cols = _read(path)
        fig, ax = plt.subplots(figsize=(6, 4))
        if name == "gain_histogram":
            left, right = _floats(cols["bin_left"]), _floats(cols["bin_right"])
            ax.bar(left, _floats(cols["density"]), width=[r - l for l, r in zip(left, right)],
                   align="edge", color="0.8", edgecolor="0.3")
            ax.set_xlabel("gain")
            ax.set_ylabel("density")
        elif name == "gain_kde":
            ax.plot(_floats(cols["grid"]), _floats(cols["density"]), color="0.2")
            ax.set_xlabel("gain")
            ax.set_ylabel("density")
        elif name == "gain_qq":
            t, s = _floats(cols["theoretical"]), _floats(cols["sample"])
            ax.plot(t, s, "o", ms=3, color="0.2")
            ax.set_xlabel("standard normal quantile")
            ax.set_ylabel("gain")
        elif name == "cohort_kde_overlay":
            grid = _floats(cols["grid"])
            for i, key in enumerate(k for k in cols if k.startswith("density_")):
                ax.plot(grid, _floats(cols[key]), label=key[len("density_"):], color=str(0.2 + 0.4 * (i % 2)))
            ax.legend()
            ax.set_xlabel("gain")
            ax.set_ylabel("density")
        else:
            resp = "gain" if name == "gain_vs_initial_scatter" else "increase"
            x, y, f = _floats(cols["initial"]), _floats(cols[resp]), _floats(cols["fitted"])
            ax.plot(x, y, "o", ms=3, color="0.4")
            order = sorted(range(len(x)), key=x.__getitem__)
            ax.plot([x[i] for i in order], [f[i] for i in order], color="0.1")
            ax.set_xlabel("initial score")
            ax.set_ylabel(resp)
        ax.set_title(comment, fontsize=7)
        target = out_dir / f"{name}.svg"
        try:
            fig.savefig(target, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise IoError(f"cannot write SVG: {exc}", path=str(target)) from exc
        finally:
            plt.close(fig)
        written.append(target)
    return written
