"""report command: re-emit the CSV learning curve of a JSON run report."""

from pathlib import Path

import typer

from poolal.cli.common import console, exit_on_error, is_quiet
from poolal.data.reports import ReportFormat, read_report, write_report


def report(
    ctx: typer.Context,
    report_json: Path = typer.Argument(..., help="report.json written by `poolal run`"),
    out: Path | None = typer.Option(
        None, "--out", "-o", help="CSV path (default: next to the JSON)"
    ),
):
    """Convert a JSON run report to the per-round CSV."""
    with exit_on_error():
        run_report = read_report(report_json)
        target = out or report_json.with_suffix(".csv")
        write_report(run_report, target, ReportFormat.CSV)

    if not is_quiet(ctx):
        console.print(f"Wrote {len(run_report.rounds)} rounds to {target}")
