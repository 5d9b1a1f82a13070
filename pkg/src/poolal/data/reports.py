"""Report, audit and checkpoint emission.

Every writer produces UTF-8 text with LF endings and floats in shortest
round-trip form, so equal inputs give byte-identical files.
"""

import csv
import io
import json
import logging
from collections.abc import Iterable, Sequence
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from poolal.core.errors import ReportIOError
from poolal.core.models.head import SoftmaxHead
from poolal.core.models.pool import LabelRecord
from poolal.core.models.report import ComparisonReport, RunReport
from poolal.core.models.strategy import ScoredInstance

logger = logging.getLogger(__name__)


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


REPORT_COLUMNS = (
    "round",
    "test_accuracy",
    "train_loss",
    "oracle_spent",
    "pseudo_count",
    "pseudo_accuracy",
    "wall_time_ms",
)
CURVE_COLUMNS = ("round", "mean_accuracy", "sd_accuracy", "runs")
SUMMARY_COLUMNS = ("variant", "round", "mean_accuracy", "sd_accuracy", "runs")
SCORE_COLUMNS = ("id", "uncertainty", "density", "hybrid")
PSEUDO_AUDIT_COLUMNS = ("id", "label", "confidence", "round", "true_label")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _write_text(path: Path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise ReportIOError(path, e) from e


def _read_text(path: Path) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(path, e) from e


def model_json(model: BaseModel) -> str:
    """Stable, indented JSON for a model."""
    return model.model_dump_json(indent=2) + "\n"


def report_csv(report: RunReport) -> str:
    return _csv_text(
        REPORT_COLUMNS,
        (
            (
                r.round,
                r.test_accuracy,
                r.train_loss,
                r.oracle_spent,
                r.pseudo_count,
                r.pseudo_accuracy,
                r.wall_time_ms,
            )
            for r in report.rounds
        ),
    )


def write_report(report: RunReport, path: Path, format: ReportFormat | str) -> None:
    """Write a run report as JSON (full schema) or CSV (one row per round).

    Raises:
        ReportIOError: With the failing path.
    """
    fmt = ReportFormat(format)
    text = model_json(report) if fmt == ReportFormat.JSON else report_csv(report)
    _write_text(path, text)
    logger.debug("Wrote %s report to %s", fmt.value, path)


def read_report(path: Path) -> RunReport:
    """Read a JSON run report.

    Raises:
        ReportIOError: If the file is unreadable or is not a valid report.
    """
    text = _read_text(path)
    try:
        return RunReport.model_validate_json(text)
    except ValidationError as e:
        raise ReportIOError(Path(path), e) from e


def write_comparison(report: ComparisonReport, out_dir: Path) -> list[Path]:
    """Write ``comparison.json``, one ``curve_<variant>.csv`` per variant and ``summary.csv``.

    When a variant name repeats, later curves get a ``_<n>`` suffix.
    """
    out_dir = Path(out_dir)
    written = [out_dir / "comparison.json"]
    _write_text(written[0], model_json(report))

    used: dict[str, int] = {}
    summary_rows: list[tuple[Any, ...]] = []
    for variant in report.variants:
        count = used.get(variant.name, 0)
        used[variant.name] = count + 1
        stem = variant.name if count == 0 else f"{variant.name}_{count}"
        path = out_dir / f"curve_{stem}.csv"
        rows = [(s.round, s.mean_accuracy, s.sd_accuracy, s.runs) for s in variant.curve]
        _write_text(path, _csv_text(CURVE_COLUMNS, rows))
        written.append(path)
        summary_rows.extend((stem, *row) for row in rows)

    summary = out_dir / "summary.csv"
    _write_text(summary, _csv_text(SUMMARY_COLUMNS, summary_rows))
    written.append(summary)
    return written


def write_scores(scored: Sequence[ScoredInstance], path: Path) -> None:
    """Per-round candidate scores, sorted by id."""
    rows = [
        (s.id, s.uncertainty, s.density, s.hybrid)
        for s in sorted(scored, key=lambda s: s.id)
    ]
    _write_text(path, _csv_text(SCORE_COLUMNS, rows))


def pseudo_audit_rows(
    records: Iterable[LabelRecord], true_labels: Sequence[int]
) -> list[tuple[Any, ...]]:
    return [
        (r.instance_id, r.label, r.confidence, r.round, int(t))
        for r, t in zip(records, true_labels)
    ]


def write_pseudo_audit(rows: Iterable[Sequence[Any]], path: Path) -> None:
    """Every pseudo-label issued during a run, next to its hidden true label."""
    _write_text(path, _csv_text(PSEUDO_AUDIT_COLUMNS, rows))


def write_head(head: SoftmaxHead, path: Path) -> None:
    _write_text(path, json.dumps(head.to_checkpoint(), indent=2) + "\n")


def read_head(path: Path) -> SoftmaxHead:
    text = _read_text(path)
    try:
        return SoftmaxHead.from_checkpoint(json.loads(text))
    except (ValueError, KeyError, TypeError) as e:
        raise ReportIOError(Path(path), e) from e


def read_pseudo_audit(path: Path) -> list[list[str]]:
    """Rows of an existing audit file, as text; empty if the file is absent."""
    path = Path(path)
    if not path.exists():
        return []
    rows = list(csv.reader(io.StringIO(_read_text(path))))
    return rows[1:]
