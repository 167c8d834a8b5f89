"""Ingestion, batch runs and report output."""

from ..records import CurveDBRecord
from .config import RunConfig
from .ingest import IngestResult, LineError, Quarantined, ingest
from .report import SeriesBundle, write_csv, write_distance_svg, write_svg
from .runner import (
    CheckpointMismatch,
    FilterOutcome,
    NotEligibleError,
    RSReport,
    ShaBatch,
    filter_curves,
    rs_report,
    sha_batch,
    twist_list,
)

__all__ = [
    "CheckpointMismatch",
    "CurveDBRecord",
    "FilterOutcome",
    "IngestResult",
    "LineError",
    "NotEligibleError",
    "Quarantined",
    "RSReport",
    "RunConfig",
    "SeriesBundle",
    "ShaBatch",
    "filter_curves",
    "ingest",
    "rs_report",
    "sha_batch",
    "twist_list",
    "write_csv",
    "write_distance_svg",
    "write_svg",
]
