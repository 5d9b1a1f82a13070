"""CLI entry point for poolal."""

import typer

from poolal.cli.commands import compare, gen_data, report, run
from poolal.cli.common import CliState
from poolal.config.settings import get_settings
from poolal.core.util.config import load_dotenv_if_exists
from poolal.core.util.log_setup import configure_logging

app = typer.Typer(
    name="poolal",
    help="poolal: pool-based active learning with a budget annotator",
    no_args_is_help=True,
)

app.command(name="gen-data")(gen_data.gen_data)
app.command(name="run")(run.run)
app.command(name="compare")(compare.compare)
app.command(name="report")(report.report)


@app.callback()
def main(
    ctx: typer.Context,
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only print results and errors"),
    log_level: str | None = typer.Option(None, "--log-level", help="Overrides POOLAL_LOG_LEVEL"),
):
    """poolal CLI."""
    load_dotenv_if_exists()
    configure_logging(log_level or get_settings().log_level, quiet=quiet)
    ctx.obj = CliState(quiet=quiet)


if __name__ == "__main__":
    app()
