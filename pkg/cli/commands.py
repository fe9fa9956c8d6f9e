"""Command-line interface for the manifold samplers."""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import click
import numpy as np
from pydantic import ValidationError

from cli.config import CliSettings, RunConfig
from core.chain import ChainConfig
from core.errors import InputError, SamplingError
from core.persistence import load_values, write_csv, write_json
from features.gamma import GammaConstraint, GammaMetropolisChain
from features.moments import neyman_smooth_gof
from features.pitfall import path_system, random_system, verify_pitfall
from features.torus import TorusParams, sample_torus_area, sample_torus_area_sharded, sample_torus_naive
from features.validation import lag_autocorrelation
from features.validation.calibration import SUITES, run_calibration
from utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

TORUS_HEADER = ["theta", "psi", "x", "y", "z", "method"]


def _settings(ctx: click.Context) -> CliSettings:
    return ctx.obj["settings"]


def _seed(ctx: click.Context, seed: Optional[int]) -> int:
    return _settings(ctx).default_seed if seed is None else seed


def _json_only(fmt: str, name: str) -> None:
    if fmt != "json":
        raise click.UsageError(f"{name} writes a JSON report; --format csv is not supported", ctx=None)


SEED_OPTION = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Root seed (u64)")
OUT_OPTION = click.option("--out", type=click.Path(dir_okay=False), required=True, help="Output file")


@click.group()
@click.option("--log-level", default=None, help="Logging level (default: MS_LOG_LEVEL or WARNING)")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """Sample densities on embedded manifolds and run conditional tests."""
    ctx.ensure_object(dict)
    settings = CliSettings()
    ctx.obj["settings"] = settings
    setup_logging(log_level or settings.log_level)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--R", "major", type=float, default=1.0, show_default=True, help="Major radius")
@click.option("--r", "minor", type=float, default=0.9, show_default=True, help="Minor radius")
@SEED_OPTION
@click.option("--envelope", type=click.Choice(["tight", "paper"]), default="tight", show_default=True)
@click.option("--method", type=click.Choice(["area", "naive"]), default="area", show_default=True)
@click.option("--shards", type=click.IntRange(min=1), default=1, show_default=True)
@OUT_OPTION
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.pass_context
def torus(
    ctx: click.Context,
    n: int,
    major: float,
    minor: float,
    seed: Optional[int],
    envelope: str,
    method: str,
    shards: int,
    out: str,
    fmt: str,
) -> None:
    """Points on the curved torus under area measure (or the naive measure)."""
    seed = _seed(ctx, seed)
    params = TorusParams(R=major, r=minor)
    run_cfg = RunConfig(
        subcommand="torus",
        params={"n": n, "R": major, "r": minor, "envelope": envelope, "method": method, "shards": shards},
        seed=seed,
        out=Path(out),
        format=fmt,
    )
    if method == "naive":
        samples = sample_torus_naive(n, params, ChainConfig(seed=seed).rng(0))
    elif shards > 1:
        samples = sample_torus_area_sharded(n, params, seed, shards, envelope, _settings(ctx).workers)
    else:
        samples = sample_torus_area(n, params, envelope, ChainConfig(seed=seed).rng(0))

    if fmt == "csv":
        write_csv(out, TORUS_HEADER, (s.as_row() for s in samples), run_cfg.embed())
    else:
        rows = [dict(zip(TORUS_HEADER, s.as_row())) for s in samples]
        write_json(out, {"config": run_cfg.embed(), "samples": rows})
    click.echo(f"Wrote {len(samples)} samples to {out}")


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=3), required=True)
@click.option("--S", "total", type=float, required=True, help="Sum constraint")
@click.option("--P", "product", type=float, required=True, help="Product constraint")
@click.option("--steps", type=click.IntRange(min=0), default=10_000, show_default=True)
@click.option("--burnin", type=click.IntRange(min=0), default=1_000, show_default=True)
@click.option("--thin", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--eps", type=float, default=None, help="Proposal half-width (default 0.05 S/n)")
@SEED_OPTION
@click.option("--mode", type=click.Choice(["area", "conditional"]), default="area", show_default=True)
@click.option("--permute-prob", type=click.FloatRange(0.0, 1.0), default=0.0, show_default=True)
@OUT_OPTION
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.pass_context
def gamma(
    ctx: click.Context,
    n: int,
    total: float,
    product: float,
    steps: int,
    burnin: int,
    thin: int,
    eps: Optional[float],
    seed: Optional[int],
    mode: str,
    permute_prob: float,
    out: str,
    fmt: str,
) -> None:
    """Metropolis chain on sum(x) = S, prod(x) = P."""
    seed = _seed(ctx, seed)
    cfg = ChainConfig(seed=seed, eps=eps, steps=steps, burn_in=burnin, thin=thin)
    chain = GammaMetropolisChain(GammaConstraint(n=n, S=total, P=product), target=mode, eps=eps, permute_prob=permute_prob)
    run_cfg = RunConfig(
        subcommand="gamma",
        params={**cfg.model_dump(mode="json"), "eps": chain.eps, "n": n, "S": total, "P": product, "mode": mode, "permute_prob": permute_prob},
        seed=seed,
        out=Path(out),
        format=fmt,
    )
    records = list(chain.run(cfg))
    if len(records) > 2:
        lag1 = lag_autocorrelation(np.array([r.log_density for r in records]))
        logger.info("lag-1 autocorrelation of log density: %.3f", lag1)
    header = [f"x{i}" for i in range(1, n + 1)] + ["logdensity", "accepted"]
    if fmt == "csv":
        write_csv(out, header, (r.as_row() for r in records), run_cfg.embed())
    else:
        write_json(
            out,
            {
                "config": run_cfg.embed(),
                "rejection_counts": chain.last_rejections,
                "samples": [dict(zip(header, r.as_row())) for r in records],
            },
        )
    click.echo(f"Wrote {len(records)} states to {out}")


def _parse_degrees(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint="--degrees") from exc


@cli.command()
@click.option("--data", type=click.Path(exists=True, dir_okay=False), required=True, help="One value per line")
@click.option("--B", "replicates", type=click.IntRange(min=1), default=99, show_default=True)
@click.option("--T", "half_steps", type=click.IntRange(min=0), default=500, show_default=True)
@click.option("--eps", type=float, default=None, help="Curve-move half-width (default 0.05)")
@SEED_OPTION
@click.option("--statistic", type=click.Choice(["legendre5", "custom"]), default="legendre5", show_default=True)
@click.option("--degrees", default=None, help="Comma-separated Legendre degrees for --statistic custom")
@click.option("--schedule", type=click.Choice(["random", "gray"]), default="random", show_default=True)
@click.option("--acceptance", type=click.Choice(["paper", "arclength"]), default="paper", show_default=True)
@OUT_OPTION
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
@click.pass_context
def neyman(
    ctx: click.Context,
    data: str,
    replicates: int,
    half_steps: int,
    eps: Optional[float],
    seed: Optional[int],
    statistic: str,
    degrees: Optional[str],
    schedule: str,
    acceptance: str,
    out: str,
    fmt: str,
) -> None:
    """Conditional Neyman smooth test given the first four power sums."""
    _json_only(fmt, "neyman")
    seed = _seed(ctx, seed)
    degree_list = _parse_degrees(degrees)
    values = load_values(data)
    cfg = ChainConfig(seed=seed, eps=eps)
    report = neyman_smooth_gof(
        values,
        cfg,
        replicates,
        half_steps,
        statistic=statistic,
        degrees=degree_list,
        schedule=schedule,
        acceptance=acceptance,
        workers=_settings(ctx).workers,
    )
    run_cfg = RunConfig(
        subcommand="neyman",
        params={
            "data": data,
            "B": replicates,
            "T": half_steps,
            "eps": report.metadata.get("eps"),
            "statistic": statistic,
            "degrees": degree_list,
            "schedule": schedule,
            "acceptance": acceptance,
        },
        seed=seed,
        out=Path(out),
        format=fmt,
    )
    write_json(out, {"config": run_cfg.embed(), **report.model_dump(mode="json")})
    click.echo(f"p_value = {report.p_value:.6g} (rank {report.rank} of {replicates + 1})")


@cli.command()
@click.option("--demo", type=click.Choice(["path3", "random"]), default="path3", show_default=True)
@click.option("--n", "n", type=click.IntRange(min=3), default=10, show_default=True, help="Vertices for --demo random")
@click.option("--open-neighborhoods", is_flag=True, help="Exclude x from N_x in the random demo")
@SEED_OPTION
@OUT_OPTION
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
@click.pass_context
def pitfall(ctx: click.Context, demo: str, n: int, open_neighborhoods: bool, seed: Optional[int], out: str, fmt: str) -> None:
    """Stationary law of the neighborhood kernel versus its target."""
    _json_only(fmt, "pitfall")
    seed = _seed(ctx, seed)
    if demo == "path3":
        system = path_system(3)
        params: dict[str, Any] = {"demo": demo}
    else:
        system = random_system(n, ChainConfig(seed=seed).rng(0), closed=not open_neighborhoods)
        params = {"demo": demo, "n": n, "closed": not open_neighborhoods}
    report = verify_pitfall(system)
    run_cfg = RunConfig(subcommand="pitfall", params=params, seed=seed, out=Path(out), format=fmt)
    write_json(out, {"config": run_cfg.embed(), **report.to_dict()})
    click.echo(f"bias = {report.bias:.6g}, metropolized_ok = {report.metropolized_ok}")


@cli.command()
@click.option("--suite", type=click.Choice([*SUITES, "all"]), default="all", show_default=True)
@click.option("--replications", type=click.IntRange(min=1), default=100, show_default=True)
@SEED_OPTION
@OUT_OPTION
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
@click.pass_context
def validate(ctx: click.Context, suite: str, replications: int, seed: Optional[int], out: str, fmt: str) -> None:
    """Run calibration suites and write a JSON summary."""
    _json_only(fmt, "validate")
    seed = _seed(ctx, seed)
    summary = run_calibration(suite, replications, seed)
    run_cfg = RunConfig(
        subcommand="validate",
        params={"suite": suite, "replications": replications},
        seed=seed,
        out=Path(out),
        format=fmt,
    )
    write_json(out, {"config": run_cfg.embed(), **summary})
    click.echo(f"passed = {summary['passed']}")


def run(argv: Sequence[str] | None = None) -> int:
    """Execute one subcommand; 0 success, 1 usage error, 2 numerical failure."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = cli.main(args=args, prog_name="manifold-sampling", standalone_mode=False, obj={})
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted.", err=True)
        return 1
    except (InputError, ValidationError) as e:
        click.echo(f"Error: {e}", err=True)
        return 1
    except SamplingError as e:
        logger.error("%s: %s", type(e).__name__, e)
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
