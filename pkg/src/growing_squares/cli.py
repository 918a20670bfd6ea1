"""Command line entry point: ``growing-squares {cluster,census,gen}``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 invariant violation.
"""
from __future__ import annotations

import json
import sys
import traceback
from pathlib import Path

import click

from .arith import Arithmetic
from .clustering import RunStats, brute_cluster, cluster
from .io import GENERATORS, InputError, dumps_dendrogram, format_csv, generate, read_points, stats_to_dict, write_text
from .kinetic import CertificateError
from .linked import OverlapError
from .wbtree import DEFAULT_ALPHA

EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 1, 2, 3


class InvariantViolation(RuntimeError):
    pass


def _check_alpha(ctx, param, value):
    if not 0 < value <= 1 - 2**-0.5:
        raise click.BadParameter("must lie in (0, 0.2928]")
    return value


def _figure_path(out, figure, no_figure):
    if no_figure:
        return None
    if figure:
        return figure
    if out and out != "-":
        return str(Path(out).with_suffix(".png"))
    return None


@click.group()
def cli():
    """Disjoint growing squares: clustering, link census, instance generation."""


@cli.command("cluster")
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--out", default="-", help="Dendrogram JSON path (default stdout).")
@click.option("--mode", type=click.Choice(["exact", "float"]), default="exact", show_default=True)
@click.option("--epsilon", type=float, default=1e-9, show_default=True, help="Comparison tolerance in float mode.")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True, callback=_check_alpha)
@click.option("--horizon", default=None, help="Stop before events later than this time.")
@click.option("--instances", type=click.Choice(["8", "4"]), default="8", show_default=True)
@click.option("--oracle", is_flag=True, help="Also run the brute-force simulation and compare.")
@click.option("--stats", "stats_path", default=None, help="Write run statistics JSON here.")
@click.option("--figure", default=None, help="PNG path (default: next to --out).")
@click.option("--no-figure", is_flag=True)
def cmd_cluster(input_path, out, mode, epsilon, alpha, horizon, instances, oracle, stats_path, figure, no_figure):
    """Cluster the glyphs in INPUT (CSV or JSON array)."""
    arith = Arithmetic(mode == "exact", epsilon)
    points = read_points(input_path, arith)
    if horizon is not None:
        try:
            horizon = arith.num(horizon)
        except ValueError:
            raise click.BadParameter(f"not a number: {horizon!r}", param_hint="--horizon") from None
    stats = RunStats()
    dendro = cluster(points, horizon=horizon, instances=int(instances), arith=arith, alpha=alpha, stats=stats)
    write_text(out, dumps_dendrogram(dendro, arith))
    if stats_path:
        Path(stats_path).write_text(json.dumps(stats_to_dict(stats), indent=1) + "\n")
    fig = _figure_path(out, figure, no_figure)
    if fig:
        from .plots import dendrogram_figure

        dendrogram_figure(dendro, fig)
    if oracle:
        ref = brute_cluster(points, horizon=horizon)
        diff = dendro.first_divergence(ref)
        if diff is None:
            click.echo("MATCH", err=out == "-")
        else:
            click.echo(f"MISMATCH: {diff}", err=True)
            raise InvariantViolation(f"dendrogram differs from brute force: {diff}")


@cli.command("census")
@click.option("--d", "dims", type=click.IntRange(1, 3), multiple=True, default=(1,), show_default=True)
@click.option("--nmin", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--nmax", type=click.IntRange(min=1), default=4096, show_default=True)
@click.option("--dist", type=click.Choice(["uniform", "grid", "adversarial-diagonal"]), default="uniform", show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--seeds", type=click.IntRange(min=1), default=1, show_default=True, help="Number of consecutive seeds per size.")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True, callback=_check_alpha)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("-o", "--out", default="-", help="CSV path (default stdout).")
@click.option("--figure", default=None, help="PNG path (default: next to --out).")
@click.option("--no-figure", is_flag=True)
def cmd_census(dims, nmin, nmax, dist, seed, seeds, alpha, workers, out, figure, no_figure):
    """Count range-tree links over a doubling sweep n = m in [NMIN, NMAX]."""
    import io as _io

    from .census import census, sweep, write_rows

    if nmin > nmax:
        raise click.BadParameter("--nmin exceeds --nmax")
    configs = [c for d in dims for s in range(seed, seed + seeds) for c in sweep(d, nmin, nmax, dist, s, alpha)]
    rows = census(configs, workers=workers)
    buf = _io.StringIO()
    write_rows(rows, buf)
    write_text(out, buf.getvalue())
    fig = _figure_path(out, figure, no_figure)
    if fig:
        from .plots import census_figure

        census_figure(rows, fig)


@cli.command("gen")
@click.option("-n", "--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--kind", type=click.Choice(GENERATORS), default="uniform", show_default=True)
@click.option("--weight-ratio", type=click.FloatRange(min=1), default=1e4, show_default=True)
@click.option("--blobs", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("-o", "--out", default="-", help="CSV path (default stdout).")
def cmd_gen(n, kind, weight_ratio, blobs, seed, out):
    """Generate a synthetic glyph instance as CSV."""
    write_text(out, format_csv(generate(n, kind, weight_ratio, seed, blobs)))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="growing-squares", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except InputError as e:
        click.echo(f"input error: {e}", err=True)
        return EXIT_INPUT
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT
    except (InvariantViolation, CertificateError, OverlapError, AssertionError) as e:
        click.echo(f"invariant violation: {e}", err=True)
        traceback.print_exc(file=sys.stderr)
        return EXIT_INVARIANT
    return 0


if __name__ == "__main__":
    sys.exit(main())
