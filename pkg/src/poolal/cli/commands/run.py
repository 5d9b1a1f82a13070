"""run command: one active learning experiment."""

import json
from pathlib import Path
from typing import Any

import typer
from rich.table import Table

from poolal.cli.common import (
    console,
    exit_on_error,
    is_quiet,
    resolve_config,
    run_overrides,
)
from poolal.config.settings import get_settings
from poolal.core.models.ids import SelectorKind, UncertaintyKind
from poolal.core.models.report import RunReport
from poolal.data.reports import (
    ReportFormat,
    pseudo_audit_rows,
    read_pseudo_audit,
    write_head,
    write_pseudo_audit,
    write_report,
    write_scores,
)
from poolal.data.snapshots import read_snapshot, write_snapshot
from poolal.engine.al_loop import ActiveLearningLoop, RoundOutcome, train_full_pool

SNAPSHOT_NAME = "snapshot.json"
AUDIT_NAME = "pseudo_audit.csv"


class RunArtifacts:
    """Round observer: live progress line, snapshot, score dumps and pseudo audit."""

    def __init__(self, out_dir: Path, dump_scores: bool, quiet: bool, audit_rows: list[Any]):
        self.out_dir = out_dir
        self.dump_scores = dump_scores
        self.quiet = quiet
        self.audit_rows = audit_rows

    def __call__(self, loop: ActiveLearningLoop, outcome: RoundOutcome) -> None:
        record = outcome.record
        if not self.quiet:
            pseudo = "-" if record.pseudo_accuracy is None else f"{record.pseudo_accuracy:.3f}"
            console.print(
                f"round {record.round:>3}  acc {record.test_accuracy:.4f}  "
                f"loss {record.train_loss:.4f}  spent {record.oracle_spent:>5}  "
                f"pseudo {record.pseudo_count:>4} (acc {pseudo})"
            )
        if self.dump_scores and outcome.selection.scored:
            write_scores(
                outcome.selection.scored,
                self.out_dir / "scores" / f"round_{record.round:04d}.csv",
            )
        pseudo_records = outcome.state.pseudo
        if pseudo_records:
            truth = loop.dataset.labels_of([r.instance_id for r in pseudo_records])
            self.audit_rows.extend(pseudo_audit_rows(pseudo_records, truth.tolist()))
        if loop.config.pseudo_enabled:
            write_pseudo_audit(self.audit_rows, self.out_dir / AUDIT_NAME)
        write_snapshot(loop.snapshot(), self.out_dir / SNAPSHOT_NAME)


def _summary_table(report: RunReport) -> Table:
    table = Table(title=f"{report.strategy} (seed {report.seed})")
    table.add_column("Metric")
    table.add_column("Value", justify="right")
    if report.summary is not None:
        s = report.summary
        table.add_row("final accuracy", f"{s.final_accuracy:.4f}")
        table.add_row("final NLL", f"{s.final_nll:.4f}")
        table.add_row("oracle spent", str(s.oracle_spent))
        table.add_row("labeled", str(s.labeled_count))
        table.add_row("pseudo", str(s.pseudo_count))
        table.add_row("rounds", str(s.rounds))
        table.add_row("stopped on", s.termination)
    return table


def run(
    ctx: typer.Context,
    config: Path | None = typer.Option(None, "--config", "-c", help="JSON config file"),
    data: Path | None = typer.Option(
        None, "--data", help="Embedding CSV (overrides the config's dataset)"
    ),
    out_dir: Path | None = typer.Option(None, "--out-dir", help="Output directory"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),
    budget: int | None = typer.Option(None, "--budget", help="Oracle budget m"),
    batch_k: int | None = typer.Option(None, "--batch-k", help="Queries per round k"),
    seed_count: int | None = typer.Option(None, "--seed-count", help="Initial seed labels"),
    tau: float | None = typer.Option(None, "--tau", help="Pseudo-label confidence threshold"),
    beta: float | None = typer.Option(
        None, "--beta", help="Density exponent (0 = pure uncertainty)"
    ),
    uncertainty: UncertaintyKind | None = typer.Option(
        None, "--uncertainty", help="Uncertainty measure"
    ),
    selector: SelectorKind | None = typer.Option(
        None, "--selector", help="hybrid scoring or random sampling"
    ),
    pseudo: bool | None = typer.Option(
        None, "--pseudo/--no-pseudo", help="Run the budget annotator"
    ),
    noise: float | None = typer.Option(None, "--noise", help="Oracle label-flip rate"),
    epochs: int | None = typer.Option(None, "--epochs", help="SGD epochs per round (default 15)"),
    batch_size: int | None = typer.Option(
        None, "--batch-size", help="SGD mini-batch size (default 32)"
    ),
    lr: float | None = typer.Option(None, "--lr", help="SGD learning rate (default 0.05)"),
    rounds_limit: int | None = typer.Option(
        None, "--rounds-limit", help="Stop after this many rounds"
    ),
    resume: Path | None = typer.Option(None, "--resume", help="Continue from a snapshot.json"),
    dump_scores: bool = typer.Option(False, "--dump-scores", help="Write scores/round_XXXX.csv"),
    timing: bool | None = typer.Option(
        None, "--timing/--no-timing", help="Record wall time in reports"
    ),
    with_ceiling: bool = typer.Option(
        False, "--with-ceiling", help="Also train on the full labelled pool"
    ),
):
    """Run one experiment and write report.json, report.csv and head.json."""
    quiet = is_quiet(ctx)
    settings = get_settings()

    with exit_on_error():
        resolved = resolve_config(
            config,
            run_overrides(
                seed=seed,
                budget=budget,
                batch_k=batch_k,
                seed_count=seed_count,
                tau=tau,
                beta=beta,
                uncertainty=uncertainty.value if uncertainty else None,
                selector=selector.value if selector else None,
                pseudo=pseudo,
                noise=noise,
                epochs=epochs,
                batch_size=batch_size,
                lr=lr,
                rounds_limit=rounds_limit,
                timing=timing,
            ),
            data=data,
            out_dir=out_dir,
        )
        target = Path(resolved.out_dir or settings.out_dir)
        dataset = resolved.dataset.load()

        audit_rows: list[Any] = []
        if resume is not None:
            snapshot = read_snapshot(resume)
            loop = ActiveLearningLoop.from_snapshot(
                dataset, snapshot, workers=settings.score_workers
            )
            audit_rows.extend(
                row for row in read_pseudo_audit(target / AUDIT_NAME)
                if int(row[3]) < snapshot.next_round
            )
            if not quiet:
                console.print(f"Resuming at round {snapshot.next_round} from {resume}")
        else:
            loop = ActiveLearningLoop(dataset, resolved.run, workers=settings.score_workers)

        if not quiet:
            console.print("[bold]Resolved configuration[/bold]")
            console.print_json(json.dumps(loop.config.model_dump(mode="json")))
            console.print(f"dataset {dataset.name} digest {dataset.digest}")

        artifacts = RunArtifacts(target, dump_scores, quiet, audit_rows)
        run_report = loop.run(observer=artifacts)

        write_report(run_report, target / "report.json", ReportFormat.JSON)
        write_report(run_report, target / "report.csv", ReportFormat.CSV)
        write_head(loop.head, target / "head.json")
        if loop.config.pseudo_enabled:
            write_pseudo_audit(audit_rows, target / AUDIT_NAME)

        ceiling = None
        if with_ceiling:
            _, ceiling = train_full_pool(dataset, loop.config.train, loop.config.seed)

    summary = run_report.summary
    assert summary is not None
    if not quiet:
        console.print(_summary_table(run_report))
        if ceiling is not None:
            console.print(f"full-pool ceiling accuracy {ceiling.accuracy:.4f}")
    console.print(
        f"final_accuracy={summary.final_accuracy:.4f} oracle_spent={summary.oracle_spent}"
    )
