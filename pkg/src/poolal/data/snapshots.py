"""Run-state snapshot persistence."""

import logging
from pathlib import Path

from pydantic import ValidationError

from poolal.core.errors import ReportIOError
from poolal.core.models.snapshot import SNAPSHOT_FORMAT_VERSION, RunSnapshot

logger = logging.getLogger(__name__)


def write_snapshot(snapshot: RunSnapshot, path: Path) -> None:
    """Write ``snapshot`` atomically (temp file, then rename)."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tmp.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(snapshot.model_dump_json(indent=2) + "\n")
        tmp.replace(path)
    except OSError as e:
        raise ReportIOError(path, e) from e
    logger.debug("Snapshot for round %d written to %s", snapshot.next_round, path)


def read_snapshot(path: Path) -> RunSnapshot:
    """Load a snapshot, rejecting unknown format versions.

    Raises:
        ReportIOError: If the file is unreadable, malformed, or from another format version.
    """
    path = Path(path)
    try:
        snapshot = RunSnapshot.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        raise ReportIOError(path, e) from e
    if snapshot.format_version != SNAPSHOT_FORMAT_VERSION:
        raise ReportIOError(
            path, ValueError(f"unsupported snapshot version {snapshot.format_version}")
        )
    return snapshot
