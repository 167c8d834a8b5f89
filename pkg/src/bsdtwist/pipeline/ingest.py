"""Reading curve records from JSON-lines or CSV files."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..curve import SingularCurveError, make_curve
from ..localdata import conductor as conductor_of
from ..records import CurveDBRecord

MANDATORY = ("label", "ainvs", "optimal", "manin_constant")
CSV_COLUMNS = (
    "label", "ainvs", "conductor", "rank", "torsion", "optimal", "manin_constant",
    "sha", "isogeny_degrees", "two_isogenous_sha",
)


@dataclass(frozen=True)
class LineError:
    line: int
    message: str


@dataclass(frozen=True)
class Quarantined:
    line: int
    label: str
    reason: str


@dataclass
class IngestResult:
    records: list[CurveDBRecord] = field(default_factory=list)
    quarantined: list[Quarantined] = field(default_factory=list)
    errors: list[LineError] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, float)) and v in (0, 1):
        return bool(v)
    if isinstance(v, str) and v.strip().lower() in ("true", "1", "yes", "false", "0", "no"):
        return v.strip().lower() in ("true", "1", "yes")
    raise ValueError(f"not a boolean: {v!r}")


def _int_tuple(v) -> tuple[int, ...]:
    if isinstance(v, str):
        v = json.loads(v) if v.strip().startswith("[") else v.split()
    return tuple(int(x) for x in v)


def _record(raw: dict) -> CurveDBRecord:
    """Build a record from parsed fields; ValueError/KeyError describe what is wrong."""
    missing = [k for k in MANDATORY if raw.get(k) in (None, "")]
    if missing:
        raise KeyError(f"missing mandatory field(s): {', '.join(missing)}")
    ainvs = _int_tuple(raw["ainvs"])
    if len(ainvs) != 5:
        raise ValueError("ainvs must have five entries")

    def opt(key, conv):
        v = raw.get(key)
        return None if v in (None, "") else conv(v)

    manin = int(raw["manin_constant"])
    if manin <= 0:
        raise ValueError("manin_constant must be positive")
    return CurveDBRecord(
        label=str(raw["label"]),
        ainvs=ainvs,
        optimal=_bool(raw["optimal"]),
        manin_constant=manin,
        conductor=opt("conductor", int),
        rank=opt("rank", int),
        torsion=opt("torsion", _int_tuple),
        sha=opt("sha", int),
        isogeny_degrees=opt("isogeny_degrees", _int_tuple),
        two_isogenous_sha=opt("two_isogenous_sha", int),
    )


def _rows(path: Path):
    """Yield (line number, dict | exception) in file order."""
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".csv":
        reader = csv.DictReader(text.splitlines())
        if reader.fieldnames is None:
            return
        unknown = set(reader.fieldnames) - set(CSV_COLUMNS)
        if unknown or "label" not in reader.fieldnames:
            raise ValueError(f"CSV header must use columns from {CSV_COLUMNS}")
        for row in reader:
            yield reader.line_num, row
        return
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("line is not a JSON object")
            yield n, obj
        except ValueError as exc:
            yield n, exc


def ingest(path: str | Path, conductor_bound: int | None = None) -> IngestResult:
    """Parse and validate records.

    Malformed lines become errors; records lacking mandatory fields, with a
    singular model, or whose stated conductor disagrees with the computed one
    are quarantined.  A missing conductor is filled in.
    """
    path = Path(path)
    result = IngestResult()
    for line, raw in _rows(path):
        if isinstance(raw, Exception):
            result.errors.append(LineError(line, str(raw)))
            continue
        label = str(raw.get("label") or "?")
        try:
            rec = _record(raw)
            N = conductor_of(make_curve(*rec.ainvs))
        except KeyError as exc:
            result.quarantined.append(Quarantined(line, label, exc.args[0]))
            continue
        except SingularCurveError:
            result.quarantined.append(Quarantined(line, label, "singular model"))
            continue
        except (ValueError, TypeError) as exc:
            result.errors.append(LineError(line, f"{label}: {exc}"))
            continue
        if rec.conductor is not None and rec.conductor != N:
            result.quarantined.append(
                Quarantined(line, label, f"stated conductor {rec.conductor} != computed {N}")
            )
            continue
        if conductor_bound is not None and N > conductor_bound:
            continue
        if rec.conductor is None:
            rec = CurveDBRecord(**{**rec.__dict__, "conductor": N})
        result.records.append(rec)
    return result
