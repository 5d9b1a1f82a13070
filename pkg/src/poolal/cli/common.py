"""Shared CLI plumbing: config file model, precedence, dataset source, exit codes."""

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import typer
from pydantic import BaseModel, Field, ValidationError, model_validator
from rich.console import Console

from poolal.core.errors import ConfigurationError, PoolalError
from poolal.core.models.dataset import Dataset, SyntheticSpec
from poolal.core.models.run import RunConfig
from poolal.core.util.config import deep_merge, load_json_config
from poolal.data.embeddings import load_embedding_csv
from poolal.data.synthetic import generate_synthetic

logger = logging.getLogger(__name__)

EXIT_RUNTIME = 1
EXIT_CONFIG = 2

console = Console()
err_console = Console(stderr=True)


@dataclass
class CliState:
    """Global flags, carried on ``typer.Context.obj``."""

    quiet: bool = False


def is_quiet(ctx: typer.Context) -> bool:
    return isinstance(ctx.obj, CliState) and ctx.obj.quiet


class DatasetSource(BaseModel):
    """Exactly one of a synthetic spec or an embedding CSV path."""

    synthetic: SyntheticSpec | None = None
    csv: Path | None = None

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _exactly_one(self) -> "DatasetSource":
        if (self.synthetic is None) == (self.csv is None):
            raise ValueError("dataset needs exactly one of 'synthetic' or 'csv'")
        return self

    def load(self) -> Dataset:
        if self.csv is not None:
            return load_embedding_csv(self.csv)
        assert self.synthetic is not None
        return generate_synthetic(self.synthetic)


class CliConfigFile(BaseModel):
    """The JSON document accepted by ``--config``."""

    run: RunConfig = Field(default_factory=RunConfig)
    dataset: DatasetSource = Field(
        default_factory=lambda: DatasetSource(synthetic=SyntheticSpec()),
        description="Defaults to the reference synthetic dataset",
    )
    out_dir: str | None = Field(None, description="Defaults to POOLAL_OUT_DIR")

    model_config = {"frozen": True, "extra": "forbid"}


def resolve_config(
    config_path: Path | None,
    run_overrides: dict[str, Any],
    data: Path | None = None,
    out_dir: Path | None = None,
) -> CliConfigFile:
    """Merge flags over the config file over the defaults, then validate.

    ``None`` values in ``run_overrides`` mean "flag not given".
    """
    document: dict[str, Any] = load_json_config(config_path) if config_path else {}
    flags: dict[str, Any] = {"run": run_overrides}
    if data is not None:
        flags["dataset"] = {"csv": str(data)}
        document.pop("dataset", None)
    if out_dir is not None:
        flags["out_dir"] = str(out_dir)
    return CliConfigFile.model_validate(deep_merge(document, flags))


def run_overrides(
    *,
    seed: int | None = None,
    budget: int | None = None,
    batch_k: int | None = None,
    seed_count: int | None = None,
    tau: float | None = None,
    beta: float | None = None,
    uncertainty: str | None = None,
    selector: str | None = None,
    pseudo: bool | None = None,
    noise: float | None = None,
    epochs: int | None = None,
    batch_size: int | None = None,
    lr: float | None = None,
    rounds_limit: int | None = None,
    timing: bool | None = None,
) -> dict[str, Any]:
    """Translate CLI flag values into a nested RunConfig patch."""
    return {
        "seed": seed,
        "budget": budget,
        "seed_count": seed_count,
        "confidence_threshold": tau,
        "pseudo_enabled": pseudo,
        "rounds_limit": rounds_limit,
        "record_timing": timing,
        "strategy": {
            "batch_k": batch_k,
            "beta": beta,
            "uncertainty_kind": uncertainty,
            "selector": selector,
        },
        "oracle": {"noise_rate": noise},
        "train": {"epochs": epochs, "batch_size": batch_size, "learning_rate": lr},
    }


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Map failures to exit codes: 2 for configuration, 1 for runtime."""
    try:
        yield
    except (ConfigurationError, ValidationError) as e:
        err_console.print(f"[red]Configuration error:[/red] {e}")
        raise typer.Exit(EXIT_CONFIG) from e
    except (PoolalError, OSError) as e:
        err_console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(EXIT_RUNTIME) from e


def parse_int_list(text: str, option: str) -> list[int]:
    """Parse ``0,1,2`` into integers; raises typer.BadParameter (exit 2)."""
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise typer.BadParameter(
            f"expected comma-separated integers, got {text!r}", param_hint=option
        ) from None
    if not values:
        raise typer.BadParameter("must not be empty", param_hint=option)
    return values
