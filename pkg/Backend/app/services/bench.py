import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import networkx as nx
import numpy as np
import pandas as pd
from tqdm import tqdm

from app.api.schemas.bench import (
    RECORD_COLUMNS,
    TIMING_COLUMNS,
    ExperimentRecord,
    ExperimentReport,
    ExperimentSpec,
    SizeAggregate,
)
from app.api.schemas.qubo import Graph, JsspInstance, Schedule
from app.api.schemas.solver import BbsConfig, BbsRun, SpsaSettings, TilingPlan
from app.core.config import settings
from app.core.exceptions import GraphGenerationError
from app.core.logging_config import setup_logging
from app.helpers.utils import derive_int_seed, write_json
from app.services import plots
from app.services.oracle import exact_jssp, exact_maxcut
from app.services.qubo import decode_schedule, encode_jssp, encode_maxcut, load_jssp_instance
from app.services.solver import plan_tiling, quality, solve

logger = setup_logging()

KITCHEN_INSTANCE = Path(__file__).resolve().parent.parent / "data" / "kitchen.json"

# size -> (input state, tile count). Tiles are always ceil(size / width).
SIZE_PRESETS: Dict[int, tuple] = {
    2: ([1, 0], 1),
    3: ([1, 0, 1], 1),
    4: ([1, 0, 1, 0], 1),
    6: ([1, 0, 1], 2),
    8: ([1, 0, 1, 0], 2),
    12: ([1, 0, 1], 4),
    15: ([1, 0, 1], 5),
    20: ([1, 0, 1, 0], 5),  # 5, not the 4 sometimes listed for this size
    25: ([1, 0, 1, 0, 1], 5),
}

TEMPLATE_WIDTHS = (2, 3, 4, 5)


def alternating_state(width: int) -> List[int]:
    return [1 - (i % 2) for i in range(width)]


def preset_input_state(size: int) -> List[int]:
    """
    Input-state template for a problem of `size` variables. Preset sizes use SIZE_PRESETS;
    any other size takes the width in 2..5 with the least padding (smallest width on ties).
    """
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    if size in SIZE_PRESETS:
        return list(SIZE_PRESETS[size][0])
    width = min(TEMPLATE_WIDTHS, key=lambda w: (-size % w, w))
    return alternating_state(width)


def tiling_for_size(size: int) -> TilingPlan:
    return plan_tiling(size, preset_input_state(size))


def gen_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) redrawn until connected; attempt i uses a seed derived from (seed, i)."""
    if n < 2:
        raise ValueError(f"Graphs need n >= 2 vertices, got {n}")
    if not 0 < p <= 1:
        raise ValueError(f"Edge probability must lie in (0, 1], got {p}")
    for attempt in range(settings.GRAPH_CONNECT_ATTEMPTS):
        candidate = nx.gnp_random_graph(n, p, seed=derive_int_seed(seed, attempt))
        if nx.is_connected(candidate):
            logger.debug(f"G({n}, {p}) connected after {attempt + 1} draw(s), {candidate.number_of_edges()} edges")
            return Graph(n=n, edges=sorted(tuple(sorted(e)) for e in candidate.edges()))
    raise GraphGenerationError(
        f"No connected G({n}, {p}) after {settings.GRAPH_CONNECT_ATTEMPTS} attempts (seed {seed})"
    )


def _config(spec: ExperimentSpec, input_state: List[int], seed: int) -> BbsConfig:
    return BbsConfig(
        iterations=spec.iterations,
        batch_size=spec.batch_size,
        input_state=input_state,
        loops=spec.loops,
        spsa=SpsaSettings(),
        rng_seed=seed,
        record_parameters=False,
    )


def _state_label(state: Sequence[int]) -> str:
    return "-".join(str(v) for v in state)


def _record(spec: ExperimentSpec, size: int, repeat: int, seed: int, run: BbsRun, bbs_time: float, **extra) -> ExperimentRecord:
    return ExperimentRecord(
        kind=spec.kind,
        size=size,
        repeat=repeat,
        seed=seed,
        input_state=_state_label(run.config.input_state),
        tile_width=run.plan.tile_width,
        tiles=run.plan.tile_count,
        padding=run.plan.padding,
        best_cost=run.best_cost,
        final_cost=run.final_cost,
        circuit_run_count=run.circuit_run_count,
        candidate_count=run.candidate_count,
        bbs_time=bbs_time,
        best_sample=run.best_sample,
        trace=run.trace,
        **extra,
    )


def _maxcut_cell(spec: ExperimentSpec, size: int, repeat: int) -> ExperimentRecord:
    """One (size, repeat) cell. Its seeds depend only on (master seed, size, repeat)."""
    graph = gen_graph(size, spec.density, derive_int_seed(spec.seed, size, repeat, 0))
    solver_seed = derive_int_seed(spec.seed, size, repeat, 1)
    config = _config(spec, spec.input_state or preset_input_state(size), solver_seed)
    q = encode_maxcut(graph)

    started = time.perf_counter()
    run = solve(q, config)
    bbs_time = time.perf_counter() - started

    extra = {}
    if spec.exact:
        exact = exact_maxcut(graph)
        extra = {
            "exact_value": exact.best_value,
            "exact_time": exact.elapsed,
            "quality": quality(graph, run.best_sample, int(exact.best_value)),
        }
    return _record(spec, size, repeat, solver_seed, run, bbs_time, **extra)


def run_maxcut_sweep(spec: ExperimentSpec) -> ExperimentReport:
    """Max-Cut protocol: fresh connected random graph per (size, repeat), BBS against the exact cut."""
    if spec.kind != "maxcut":
        raise ValueError(f"run_maxcut_sweep needs a maxcut spec, got '{spec.kind}'")
    cells = [(size, repeat) for size in spec.sizes for repeat in range(spec.repeats)]
    records = []
    for size, repeat in tqdm(cells, desc="maxcut sweep", disable=None):
        record = _maxcut_cell(spec, size, repeat)
        logger.info(
            f"maxcut n={size} repeat={repeat}: cut cost {record.best_cost:g}, quality {record.quality}, "
            f"{record.bbs_time:.3f}s"
        )
        records.append(record)
    return ExperimentReport(spec=spec, records=records, aggregates=aggregate(records))


def load_instance(spec: ExperimentSpec) -> JsspInstance:
    instance = load_jssp_instance(spec.instance_path or KITCHEN_INSTANCE)
    if spec.t_max is not None:
        instance = instance.with_horizon(spec.t_max)
    return instance


def run_jssp(spec: ExperimentSpec) -> ExperimentReport:
    """
    Encode the instance, run BBS `repeats` times and decode every best sample.
    An infeasible horizon raises before any solver run.
    """
    if spec.kind != "jssp":
        raise ValueError(f"run_jssp needs a jssp spec, got '{spec.kind}'")
    instance = load_instance(spec)
    try:
        q, vmap = encode_jssp(instance, spec.weights, spec.gamma)
    except ValueError as e:
        logger.error(f"Cannot encode instance: {e}")
        raise
    size = len(vmap)
    input_state = spec.input_state or [1, 0, 1, 0]

    exact = exact_jssp(instance) if spec.exact else None
    records = []
    for repeat in tqdm(range(spec.repeats), desc="jssp", disable=None):
        solver_seed = derive_int_seed(spec.seed, size, repeat, 1)
        started = time.perf_counter()
        run = solve(q, _config(spec, input_state, solver_seed))
        bbs_time = time.perf_counter() - started

        decoded = decode_schedule(vmap, run.best_sample)
        extra: dict = {"gantt": decoded.gantt_rows() if isinstance(decoded, Schedule) else None}
        if isinstance(decoded, Schedule):
            extra["makespan"] = decoded.makespan
        if exact is not None and exact.feasible:
            makespan = extra.get("makespan")
            extra["exact_value"] = exact.best_value
            extra["exact_time"] = exact.elapsed
            extra["success"] = makespan == exact.best_value
            extra["quality"] = exact.best_value / makespan if makespan else 0.0
        logger.info(
            f"jssp repeat={repeat}: best cost {run.best_cost:g}, "
            f"makespan {extra.get('makespan', 'infeasible')}, {bbs_time:.3f}s"
        )
        records.append(_record(spec, size, repeat, solver_seed, run, bbs_time, **extra))
    return ExperimentReport(spec=spec, records=records, aggregates=aggregate(records))


def run_experiment(spec: ExperimentSpec, write: bool = True) -> ExperimentReport:
    report = run_maxcut_sweep(spec) if spec.kind == "maxcut" else run_jssp(spec)
    if write:
        emit_report(report)
    return report


def records_frame(records: Sequence[ExperimentRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.row() for r in records], columns=RECORD_COLUMNS + TIMING_COLUMNS)


def _stat(series: pd.Series, how: str) -> Optional[float]:
    values = series.dropna()
    if values.empty:
        return None
    return float(getattr(values.astype(float), how)())


def aggregate_frame(frame: pd.DataFrame) -> List[SizeAggregate]:
    out = []
    for size, group in frame.groupby("size", sort=True):
        success = group["success"].dropna()
        out.append(SizeAggregate(
            size=int(size),
            runs=len(group),
            quality_mean=_stat(group["quality"], "mean"),
            quality_min=_stat(group["quality"], "min"),
            quality_max=_stat(group["quality"], "max"),
            best_cost_mean=float(group["best_cost"].astype(float).mean()),
            bbs_time_mean=float(group["bbs_time"].astype(float).mean()),
            exact_time_mean=_stat(group["exact_time"], "mean"),
            success_rate=float(success.astype(bool).mean()) if not success.empty else None,
        ))
    return out


def aggregate(records: Sequence[ExperimentRecord]) -> List[SizeAggregate]:
    return aggregate_frame(records_frame(records))


def load_results(path) -> pd.DataFrame:
    """Reads results.csv back with exact float round-tripping."""
    return pd.read_csv(path, float_precision="round_trip")


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
    except OSError as e:
        raise OSError(f"Could not write {path}: {e}") from e
    return path


def emit_report(report: ExperimentReport, out=None, render_plots: Optional[bool] = None) -> Dict[str, Path]:
    """
    Writes results.csv (one row per run), aggregate.json, plot-ready series under series/
    and, unless disabled, PNG figures under plots/.
    """
    if not report.records:
        raise ValueError("Nothing to report: no records")
    out = Path(out or report.spec.out)
    render_plots = report.spec.plots if render_plots is None else render_plots

    frame = records_frame(report.records)
    aggregates = aggregate_frame(frame)
    written = {
        "results": _write_csv(frame, out / "results.csv"),
        "aggregate": write_json(out / "aggregate.json", {
            "kind": report.spec.kind,
            "spec": report.spec.model_dump(mode="json"),
            "sizes": [a.model_dump() for a in aggregates],
        }),
    }

    series = out / "series"
    band, gantt = None, None
    if report.spec.kind == "maxcut":
        written["time_vs_size"] = write_json(series / "time_vs_size.json", {
            "size": [a.size for a in aggregates],
            "bbs_time_mean": [a.bbs_time_mean for a in aggregates],
            "exact_time_mean": [a.exact_time_mean for a in aggregates],
        })
        written["quality_vs_size"] = write_json(series / "quality_vs_size.json", {
            "size": [a.size for a in aggregates],
            "mean": [a.quality_mean for a in aggregates],
            "min": [a.quality_min for a in aggregates],
            "max": [a.quality_max for a in aggregates],
        })
    else:
        curves = [learning_curve(r) for r in report.records]
        band = learning_band(curves)
        written["learning_curve"] = write_json(series / "learning_curve.json", {"repeats": curves, "band": band})
        gantt = showcase_gantt(report.records)
        written["gantt"] = write_json(series / "gantt.json", {"rows": gantt or []})

    if render_plots:
        written.update(plots.render_report(report.spec.kind, aggregates, out / "plots", band=band, gantt=gantt))
    logger.info(f"Report written to {out}")
    return written


def learning_curve(record: ExperimentRecord) -> dict:
    return {
        "iteration": [e.iteration for e in record.trace],
        "mean": [e.mean_cost for e in record.trace],
        "min": [e.min_cost for e in record.trace],
        "max": [e.max_cost for e in record.trace],
    }


def learning_band(curves: List[dict]) -> dict:
    """Per-iteration mean of the batch means across repeats, with the overall min/max envelope."""
    if not curves or not curves[0]["iteration"]:
        return {"iteration": [], "mean": [], "min": [], "max": []}
    means = np.array([c["mean"] for c in curves])
    return {
        "iteration": curves[0]["iteration"],
        "mean": means.mean(axis=0).tolist(),
        "min": np.array([c["min"] for c in curves]).min(axis=0).tolist(),
        "max": np.array([c["max"] for c in curves]).max(axis=0).tolist(),
    }


def showcase_gantt(records: Sequence[ExperimentRecord]) -> Optional[List[dict]]:
    """Gantt rows of the first optimal run, else of the first feasible one."""
    for wanted in (lambda r: r.success and r.gantt, lambda r: r.gantt):
        for record in records:
            if wanted(record):
                return record.gantt
    return None
