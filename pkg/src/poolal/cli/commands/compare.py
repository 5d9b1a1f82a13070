"""compare command: several strategies over several seeds."""

from pathlib import Path

import typer
from rich.table import Table

from poolal.cli.common import (
    EXIT_CONFIG,
    console,
    err_console,
    exit_on_error,
    is_quiet,
    parse_int_list,
    resolve_config,
    run_overrides,
)
from poolal.config.settings import get_settings
from poolal.core.models.report import ComparisonReport
from poolal.data.reports import write_comparison
from poolal.engine.comparison import compare_strategies, resolve_variant


def _finals_table(report: ComparisonReport) -> Table:
    table = Table(title=f"{len(report.seeds)} seeds")
    table.add_column("Variant")
    table.add_column("Final accuracy", justify="right")
    table.add_column("vs first", justify="right")
    diffs = {p.variant: p.mean_difference for p in report.paired}
    for i, v in enumerate(report.variants):
        delta = "" if i == 0 else f"{diffs.get(v.name, 0.0):+.4f}"
        table.add_row(v.name, f"{v.mean_final_accuracy:.4f} ± {v.sd_final_accuracy:.4f}", delta)
    return table


def compare(
    ctx: typer.Context,
    strategies: str = typer.Option(
        ...,
        "--strategies",
        "-s",
        help="Comma-separated presets: random, random_budget, uncertainty, "
        "uncertainty_budget, hybrid, hybrid_budget",
    ),
    seeds: str = typer.Option("0", "--seeds", help="Comma-separated master seeds"),
    config: Path | None = typer.Option(None, "--config", "-c", help="JSON config file"),
    data: Path | None = typer.Option(None, "--data", help="Embedding CSV"),
    out_dir: Path | None = typer.Option(None, "--out-dir", help="Output directory"),
    budget: int | None = typer.Option(None, "--budget", help="Oracle budget m"),
    batch_k: int | None = typer.Option(None, "--batch-k", help="Queries per round k"),
    seed_count: int | None = typer.Option(None, "--seed-count", help="Initial seed labels"),
    tau: float | None = typer.Option(None, "--tau", help="Pseudo-label confidence threshold"),
    epochs: int | None = typer.Option(None, "--epochs", help="SGD epochs per round"),
    lr: float | None = typer.Option(None, "--lr", help="SGD learning rate"),
    rounds_limit: int | None = typer.Option(
        None, "--rounds-limit", help="Stop after this many rounds"
    ),
    parallel: int | None = typer.Option(None, "--parallel", min=1, help="Worker processes"),
):
    """Run every strategy on every seed; write curve_<variant>.csv and summary.csv."""
    names = [s.strip() for s in strategies.split(",") if s.strip()]
    seed_list = parse_int_list(seeds, "--seeds")
    if len(names) < 2:
        err_console.print("[red]compare needs at least two strategies[/red]")
        raise typer.Exit(EXIT_CONFIG)

    settings = get_settings()
    with exit_on_error():
        variants = [resolve_variant(n) for n in names]
        resolved_names = [v.name for v in variants]
        if len(set(resolved_names)) != len(resolved_names):
            err_console.print(f"[red]duplicate strategies: {', '.join(names)}[/red]")
            raise typer.Exit(EXIT_CONFIG)

        resolved = resolve_config(
            config,
            run_overrides(
                budget=budget,
                batch_k=batch_k,
                seed_count=seed_count,
                tau=tau,
                epochs=epochs,
                lr=lr,
                rounds_limit=rounds_limit,
            ),
            data=data,
            out_dir=out_dir,
        )
        dataset = resolved.dataset.load()
        report = compare_strategies(
            dataset,
            resolved.run,
            variants,
            seed_list,
            workers=parallel or settings.compare_workers,
        )
        written = write_comparison(report, Path(resolved.out_dir or settings.out_dir))

    if not is_quiet(ctx):
        console.print(_finals_table(report))
        for path in written:
            console.print(f"wrote {path}")
