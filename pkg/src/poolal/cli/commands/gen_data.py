"""gen-data command: write a synthetic embedding CSV and its digest."""

from pathlib import Path

import typer

from poolal.cli.common import console, exit_on_error
from poolal.core.models.dataset import SyntheticSpec
from poolal.data.embeddings import write_embedding_csv
from poolal.data.synthetic import generate_synthetic


def gen_data(
    out: Path = typer.Option(
        ..., "--out", "-o", help="CSV file to write; PATH.sha256 is written next to it"
    ),
    classes: int = typer.Option(10, "--classes", help="Number of classes K"),
    dim: int = typer.Option(32, "--dim", help="Embedding dimension d"),
    per_class: int = typer.Option(600, "--per-class", help="Instances per class"),
    separation: float = typer.Option(
        6.0, "--separation", help="Minimum distance between class means"
    ),
    sigma: float = typer.Option(1.0, "--sigma", help="Within-class standard deviation"),
    seed: int = typer.Option(0, "--seed", help="Generator seed"),
    name: str = typer.Option("synthetic", "--name", help="Dataset name"),
):
    """Generate Gaussian-cluster embeddings (80/20 train/test per class)."""
    with exit_on_error():
        spec = SyntheticSpec(
            class_count=classes,
            feature_dim=dim,
            per_class=per_class,
            separation=separation,
            sigma=sigma,
            rng_seed=seed,
            name=name,
        )
        dataset = generate_synthetic(spec)
        digest = write_embedding_csv(dataset, out)
        digest_path = out.with_name(out.name + ".sha256")
        digest_path.write_text(f"{digest}  {out.name}\n", encoding="utf-8")

    console.print(digest)
