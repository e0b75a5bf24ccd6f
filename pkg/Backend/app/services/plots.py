from pathlib import Path
from typing import Dict, List, Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib as mpl
import matplotlib.pyplot as plt

from app.api.schemas.bench import SizeAggregate
from app.core.logging_config import setup_logging

logger = setup_logging()


def _save(fig, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="png", bbox_inches="tight")
    except OSError as e:
        raise OSError(f"Could not write {path}: {e}") from e
    finally:
        plt.close(fig)
    return path


def plot_time_vs_size(aggregates: Sequence[SizeAggregate], path: Path) -> Path:
    sizes = [a.size for a in aggregates]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(sizes, [a.bbs_time_mean for a in aggregates], marker="o", label="BBS (local-sim)")
    exact = [(a.size, a.exact_time_mean) for a in aggregates if a.exact_time_mean is not None]
    if exact:
        ax.plot(*zip(*exact), marker="s", linestyle="--", label="Exact search")
    ax.set_yscale("log")
    ax.set_xlabel("Problem size")
    ax.set_ylabel("Mean wall time [s]")
    ax.set_title("Time to solution")
    ax.grid(True)
    ax.legend()
    return _save(fig, path)


def plot_quality_vs_size(aggregates: Sequence[SizeAggregate], path: Path) -> Path:
    rows = [a for a in aggregates if a.quality_mean is not None]
    sizes = [a.size for a in rows]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.fill_between(sizes, [a.quality_min for a in rows], [a.quality_max for a in rows], alpha=0.25, label="min/max")
    ax.plot(sizes, [a.quality_mean for a in rows], marker="o", label="mean")
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("Problem size")
    ax.set_ylabel("Quality (cut / optimal cut)")
    ax.set_title("Max-Cut solution quality")
    ax.grid(True)
    ax.legend()
    return _save(fig, path)


def plot_learning_curve(band: dict, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.fill_between(band["iteration"], band["min"], band["max"], alpha=0.25, label="min/max")
    ax.plot(band["iteration"], band["mean"], label="mean batch cost")
    ax.set_xlabel("Iteration")
    ax.set_ylabel("Cost")
    ax.set_title("Learning curve")
    ax.grid(True)
    ax.legend()
    return _save(fig, path)


def plot_gantt(rows: List[dict], path: Path) -> Path:
    """Machine rows, one bar per operation, labelled with its job."""
    machines = sorted({r["machine"] for r in rows})
    jobs = sorted({r["job"] for r in rows})
    colors = mpl.cm.Dark2.colors
    fig, ax = plt.subplots(figsize=(8, 1.5 + len(machines)))
    for row in rows:
        y = machines.index(row["machine"])
        ax.broken_barh(
            [(row["start"], row["duration"])], (y - 0.4, 0.8),
            facecolors=colors[jobs.index(row["job"]) % len(colors)],
        )
        ax.text(row["start"] + row["duration"] / 2, y, f"{row['job']} ({row['operation']})",
                ha="center", va="center", color="white", weight="bold")
    makespan = max((r["start"] + r["duration"] for r in rows), default=0)
    ax.axvline(makespan, color="red", linestyle="--")
    ax.set_yticks(range(len(machines)))
    ax.set_yticklabels(machines)
    ax.set_xlabel("Time")
    ax.set_title(f"Schedule (makespan {makespan})")
    ax.grid(True, axis="x")
    return _save(fig, path)


def render_report(
    kind: str,
    aggregates: Sequence[SizeAggregate],
    out: Path,
    band: Optional[dict] = None,
    gantt: Optional[List[dict]] = None,
) -> Dict[str, Path]:
    written = {}
    try:
        if kind == "maxcut":
            written["time_plot"] = plot_time_vs_size(aggregates, out / "time_vs_size.png")
            if any(a.quality_mean is not None for a in aggregates):
                written["quality_plot"] = plot_quality_vs_size(aggregates, out / "quality_vs_size.png")
        else:
            written["learning_plot"] = plot_learning_curve(band, out / "learning_curve.png")
            if gantt:
                written["gantt_plot"] = plot_gantt(gantt, out / "gantt.png")
    except Exception as e:
        logger.error(f"Error rendering plots into {out}: {e}")
        raise
    return written
