# app/cli.py
"""
`bench` command group. Run from Backend/ with `python -m app.cli <command>`.
"""

import json
import sys
from functools import wraps

import click
from pydantic import ValidationError

from app.api.schemas.bench import ExperimentSpec
from app.core.exceptions import BosonicSolverError
from app.core.logging_config import setup_logging
from app.services.bench import gen_graph, run_experiment
from app.services.oracle import exact_qubo
from app.services.qubo import dump_graph, load_qubo

logger = setup_logging()


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'")


def _float_list(ctx, param, value):
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'")


def _fail(payload: dict, exit_code: int = 1) -> None:
    click.echo(json.dumps(payload), err=True)
    sys.exit(exit_code)


class JsonErrorGroup(click.Group):
    """Usage errors (bad options, unknown commands) leave as JSON on stderr with click's exit status."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            logger.error(f"Usage error: {e.format_message()}")
            _fail({"error": type(e).__name__, "message": e.format_message()}, e.exit_code)


def reports_errors(command):
    """Machine-readable error object on stderr, exit status 1."""
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.ClickException:
            raise
        except BosonicSolverError as e:
            logger.error(f"{command.__name__} failed: {e}")
            _fail(e.to_dict())
        except ValidationError as e:
            logger.error(f"{command.__name__} got invalid input: {e}")
            _fail({"error": "ValidationError", "message": str(e)})
        except (OSError, ValueError) as e:
            logger.error(f"{command.__name__} failed: {e}")
            _fail({"error": type(e).__name__, "message": str(e)})
        except Exception as e:
            logger.exception(f"{command.__name__} failed unexpectedly")
            _fail({"error": type(e).__name__, "message": str(e)})
    return wrapper


def _summary(report) -> dict:
    return {
        "kind": report.spec.kind,
        "out": report.spec.out,
        "sizes": [a.model_dump() for a in report.aggregates],
    }


@click.group(cls=JsonErrorGroup)
def bench():
    """Binary Bosonic Solver benchmarks on the local simulator."""


@bench.command()
@click.option("--sizes", default="2,3,4,6,8,12,15,20,25", callback=_int_list, show_default=True)
@click.option("--density", default=0.8, type=float, show_default=True)
@click.option("--iterations", default=20, type=int, show_default=True)
@click.option("--batch", "batch_size", default=20, type=int, show_default=True)
@click.option("--repeats", default=10, type=int, show_default=True)
@click.option("--loops", default=1, type=click.IntRange(1, 2), show_default=True)
@click.option("--input-state", callback=_int_list, default=None, help="Override the size-based input state")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out", default=None, help="Output directory (defaults to OUTPUT_DIR)")
@click.option("--no-exact", is_flag=True, help="Skip the exhaustive comparison")
@click.option("--no-plots", is_flag=True, help="Write CSV/JSON only")
@reports_errors
def maxcut(sizes, density, iterations, batch_size, repeats, loops, input_state, seed, out, no_exact, no_plots):
    """Max-Cut sweep over random connected graphs."""
    spec = ExperimentSpec(
        kind="maxcut",
        sizes=sizes,
        density=density,
        iterations=iterations,
        batch_size=batch_size,
        repeats=repeats,
        loops=loops,
        input_state=input_state,
        seed=seed,
        exact=not no_exact,
        plots=not no_plots,
        **({"out": out} if out else {}),
    )
    click.echo(json.dumps(_summary(run_experiment(spec)), indent=2))


@bench.command()
@click.option("--instance", "instance_path", default=None, type=click.Path(dir_okay=False),
              help="Instance JSON (defaults to the bundled kitchen instance)")
@click.option("--tmax", "t_max", default=None, type=int, help="Override the instance horizon")
@click.option("--weights", default="1,2,5,1", callback=_float_list, show_default=True)
@click.option("--gamma", default=1.0, type=float, show_default=True)
@click.option("--iterations", default=20, type=int, show_default=True)
@click.option("--batch", "batch_size", default=20, type=int, show_default=True)
@click.option("--repeats", default=1, type=int, show_default=True)
@click.option("--loops", default=1, type=click.IntRange(1, 2), show_default=True)
@click.option("--input-state", callback=_int_list, default=None, help="Tile input state (default 1,0,1,0)")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out", default=None)
@click.option("--no-plots", is_flag=True)
@reports_errors
def jssp(instance_path, t_max, weights, gamma, iterations, batch_size, repeats, loops, input_state, seed, out, no_plots):
    """Job-shop instance through the time-indexed QUBO."""
    if len(weights) != 4:
        raise click.BadParameter("--weights needs exactly four values w1,w2,w3,w4")
    spec = ExperimentSpec(
        kind="jssp",
        instance_path=instance_path,
        t_max=t_max,
        weights=weights,
        gamma=gamma,
        iterations=iterations,
        batch_size=batch_size,
        repeats=repeats,
        loops=loops,
        input_state=input_state,
        seed=seed,
        plots=not no_plots,
        **({"out": out} if out else {}),
    )
    click.echo(json.dumps(_summary(run_experiment(spec)), indent=2))


@bench.command()
@click.option("--qubo", "qubo_path", required=True, type=click.Path(exists=True, dir_okay=False))
@reports_errors
def exact(qubo_path):
    """Exhaustive minimum of a QUBO file."""
    result = exact_qubo(load_qubo(qubo_path))
    click.echo(result.model_dump_json(indent=2, exclude_none=True))


@bench.command()
@click.option("--n", "n", required=True, type=int)
@click.option("--density", default=0.8, type=float, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@reports_errors
def graph(n, density, seed, out):
    """Write a connected random graph as edge-list JSON."""
    g = gen_graph(n, density, seed)
    dump_graph(g, out)
    click.echo(json.dumps({"n": g.n, "edges": len(g.edges), "out": out}))


if __name__ == "__main__":
    bench()
